/*
   Copyright 2026 The Fedretail Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cmath>

#include <fedretail/kernels.hpp>
#include <fedretail/privacy.hpp>

namespace fedretail::privacy {

void DPConfig::validate() const {
    if (clip_mode != ClipMode::kNone && !(clip_threshold > 0.0)) {
        throw Error{ErrorCode::kBadConfig, "clip_threshold must be > 0"};
    }
    if (!(noise_std >= 0.0)) throw Error{ErrorCode::kBadConfig, "noise_std must be >= 0"};
}

std::vector<double> clip_gradient(std::span<const double> grad, double threshold) {
    std::vector<double> out(grad.begin(), grad.end());
    kernels::clamp(out, -threshold, threshold);
    return out;
}

std::vector<double> clip_gradient_norm(std::span<const double> grad, double threshold) {
    std::vector<double> out(grad.begin(), grad.end());
    const double norm = std::sqrt(kernels::dot(grad, grad));
    if (norm > threshold) {
        const double scale = threshold / norm;
        for (double& v : out) v *= scale;
    }
    return out;
}

std::vector<double> apply_clipping(std::span<const double> grad, const DPConfig& config) {
    switch (config.clip_mode) {
        case ClipMode::kElementwise:
            return clip_gradient(grad, config.clip_threshold);
        case ClipMode::kNorm:
            return clip_gradient_norm(grad, config.clip_threshold);
        case ClipMode::kNone:
            break;
    }
    return {grad.begin(), grad.end()};
}

std::vector<double> add_gaussian_noise(std::span<const double> v, double sigma, Rng& rng) {
    std::vector<double> out(v.begin(), v.end());
    if (sigma == 0.0) return out;
    std::normal_distribution<double> noise{0.0, sigma};
    for (double& x : out) x += noise(rng);
    return out;
}

}  // namespace fedretail::privacy
