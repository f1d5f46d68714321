// Copyright 2026 The RadDet Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "raddet/annotate.hpp"
#include "raddet/dataset.hpp"
#include "raddet/error.hpp"
#include "raddet/eval.hpp"
#include "raddet/fft.hpp"
#include "raddet/phase_code.hpp"
#include "raddet/png.hpp"
#include "raddet/render.hpp"
#include "raddet/rng.hpp"
#include "raddet/scene.hpp"
#include "raddet/spectrogram.hpp"
#include "raddet/types.hpp"
#include "raddet/waveform.hpp"
