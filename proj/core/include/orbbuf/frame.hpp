#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace orbbuf {

// One grayscale video frame. Pixels are row-major, 8 bits per pixel.
struct Frame {
  std::uint64_t id = 0;          // position in the generated sequence
  double t_gen_ms = 0.0;         // generation timestamp, id * 1000 / fps
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  std::uint64_t encoded_size = 0;  // bytes on the wire, always >= 1

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct FrameSequence {
  double fps = 25.0;
  std::vector<Frame> frames;
};

struct SyntheticParams {
  int width = 128;
  int height = 96;
  int n_frames = 100;
  double dot_density = 0.1;        // fraction of bright pixels in frame 0
  double shift_px_per_frame = 1.0; // horizontal drift per frame, wrapping
  double noise_sigma = 0.0;        // stddev of per-frame additive noise
  std::uint64_t seed = 1;
};

// Bytes produced by the encoder for one frame under a linear size model.
// Never returns less than one byte.
inline std::uint64_t model_encoded_size(int width, int height, double compression_ratio) {
  const double raw = static_cast<double>(width) * static_cast<double>(height);
  const auto bytes = static_cast<std::uint64_t>(std::llround(raw * compression_ratio));
  return bytes < 1 ? 1 : bytes;
}

}  // namespace orbbuf
