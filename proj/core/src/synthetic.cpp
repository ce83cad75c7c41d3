#include "orbbuf/synthetic.hpp"

#include <cmath>

#include "orbbuf/errors.hpp"
#include "orbbuf/rng.hpp"

namespace orbbuf {

Frame shifted_copy(const Frame& frame, int px) {
  Frame out = frame;
  const int w = frame.width;
  const int offset = ((px % w) + w) % w;
  if (offset == 0) return out;
  for (int y = 0; y < frame.height; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = frame.at((x - offset + w) % w, y);
  return out;
}

FrameSequence gen_synthetic(const SyntheticParams& params, double fps) {
  if (params.width <= 0 || params.height <= 0)
    throw UsageError("synthetic: non-positive dimensions");
  if (params.n_frames < 1) throw UsageError("synthetic: need at least one frame");
  if (params.dot_density <= 0.0 || params.dot_density >= 1.0)
    throw UsageError("synthetic: dot_density must be in (0, 1)");
  if (params.shift_px_per_frame < 0.0) throw UsageError("synthetic: negative shift");
  if (params.noise_sigma < 0.0) throw UsageError("synthetic: negative noise sigma");
  if (fps <= 0.0) throw UsageError("fps must be positive");

  Frame base;
  base.width = params.width;
  base.height = params.height;
  base.pixels.resize(static_cast<std::size_t>(params.width) * params.height);
  base.encoded_size = base.pixels.size();

  SplitMix64 dots(derive_seed(params.seed, 0xD07));
  for (auto& px : base.pixels) px = dots.next_unit() < params.dot_density ? 255 : 0;

  FrameSequence seq;
  seq.fps = fps;
  seq.frames.reserve(static_cast<std::size_t>(params.n_frames));
  for (int i = 0; i < params.n_frames; ++i) {
    const auto offset = static_cast<int>(std::llround(i * params.shift_px_per_frame) %
                                         static_cast<long long>(params.width));
    Frame frame = shifted_copy(base, offset);
    if (params.noise_sigma > 0.0) {
      SplitMix64 noise(derive_seed(params.seed, 0x4015E000u + static_cast<std::uint64_t>(i)));
      for (auto& px : frame.pixels) {
        const double v = px + noise.next_gaussian() * params.noise_sigma;
        px = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : std::lround(v)));
      }
    }
    frame.id = static_cast<std::uint64_t>(i);
    frame.t_gen_ms = static_cast<double>(i) * 1000.0 / fps;
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace orbbuf
