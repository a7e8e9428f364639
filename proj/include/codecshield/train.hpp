// Copyright (c) 2026 codecshield authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CODECSHIELD_TRAIN_HPP_
#define CODECSHIELD_TRAIN_HPP_

#include <cstdint>
#include <iosfwd>

#include "codecshield/model.hpp"
#include "codecshield/trials.hpp"

namespace codecshield {

// Speaker-classification training (SGD with momentum, cosine-decayed
// learning rate, random crops) over the corpus at work_dir/corpus. When a
// speaker has at least four utterances, the last two indices are held out
// of the classifier data, so trials testing them give an honest EER; that
// number is reported through `log` using `trial_list`. Deterministic
// given `seed`. Epoch losses stream to `log` when provided.
EmbeddingModel TrainModel(const std::filesystem::path& work_dir,
                          const TrialList& trial_list, const Hyperparams& hp,
                          uint64_t seed, std::ostream* log);

}  // namespace codecshield

#endif  // CODECSHIELD_TRAIN_HPP_
