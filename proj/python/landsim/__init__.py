# Copyright 2026 The land-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Vision-based landing simulator: homography detection, Kalman tracking,
PID landing control and a synthetic world to exercise them."""

from ._core import (
    ErrorSummary,
    ExperimentSummary,
    FilterConfig,
    LandsimError,
    TrialConfig,
    build_observation,
    detector_sweep,
    estimate_homography,
    initialize_filter,
    kf_correct,
    kf_predict,
    match_descriptors,
    project_template,
    ransac_homography,
    reduce_angle90,
    run_experiment,
    run_trial,
    sort_corners,
    symmetric_transfer_error,
    wind_sweep,
    wrap_angle90,
)

__all__ = [name for name in dir() if not name.startswith("_")]
