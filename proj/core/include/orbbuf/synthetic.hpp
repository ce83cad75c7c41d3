#pragma once

#include "orbbuf/frame.hpp"

namespace orbbuf {

// Drifting random-dot sequence: frame 0 is a Bernoulli dot field, frame i is
// frame 0 shifted right by i * shift_px_per_frame (wrapping) plus fresh
// per-frame Gaussian noise. A pure function of the params.
FrameSequence gen_synthetic(const SyntheticParams& params, double fps = 25.0);

// Frame translated right by px pixels with horizontal wrap-around.
Frame shifted_copy(const Frame& frame, int px);

}  // namespace orbbuf
