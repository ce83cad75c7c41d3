#include "orbbuf/pgm.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "orbbuf/errors.hpp"

namespace orbbuf {
namespace {

struct HeaderReader {
  const std::string& data;
  std::size_t pos = 0;

  // Advances over whitespace and '#' comments, which run to end of line.
  void skip_separators() {
    while (pos < data.size()) {
      const char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  long next_int(const char* what, const std::string& path) {
    skip_separators();
    if (pos >= data.size() || data[pos] < '0' || data[pos] > '9')
      throw PgmError(PgmError::Kind::bad_header,
                     path + ": malformed PGM header, expected " + std::string(what));
    long v = 0;
    while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
      v = v * 10 + (data[pos] - '0');
      if (v > 1'000'000'000) throw PgmError(PgmError::Kind::bad_header, path + ": oversized " + what);
      ++pos;
    }
    return v;
  }
};

}  // namespace

Frame load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError(PgmError::Kind::io, path + ": cannot open");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < 2 || data[0] != 'P' || data[1] != '5')
    throw PgmError(PgmError::Kind::bad_magic, path + ": not a binary PGM (P5)");

  HeaderReader reader{data, 2};
  const long width = reader.next_int("width", path);
  const long height = reader.next_int("height", path);
  const long maxval = reader.next_int("maxval", path);
  if (width <= 0 || height <= 0)
    throw PgmError(PgmError::Kind::bad_header, path + ": non-positive dimensions");
  if (maxval <= 0 || maxval > 255)
    throw PgmError(PgmError::Kind::unsupported_maxval,
                   path + ": maxval " + std::to_string(maxval) + " unsupported, need 1..255");

  // Exactly one whitespace byte separates the header from the payload.
  if (reader.pos >= data.size())
    throw PgmError(PgmError::Kind::truncated_payload, path + ": missing payload");
  ++reader.pos;

  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (data.size() - reader.pos < expected)
    throw PgmError(PgmError::Kind::truncated_payload,
                   path + ": payload has " + std::to_string(data.size() - reader.pos) +
                       " bytes, expected " + std::to_string(expected));

  Frame frame;
  frame.width = static_cast<int>(width);
  frame.height = static_cast<int>(height);
  frame.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(reader.pos),
                      data.begin() + static_cast<std::ptrdiff_t>(reader.pos + expected));
  frame.encoded_size = expected;
  return frame;
}

void write_pgm(const Frame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PgmError(PgmError::Kind::io, path + ": cannot open for writing");
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  if (!out) throw PgmError(PgmError::Kind::io, path + ": write failed");
}

FrameSequence load_sequence(const std::string& dir, double fps) {
  if (fps <= 0.0) throw DataError("fps must be positive");
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError(dir + ": not a directory");

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      names.push_back(entry.path().filename().string());
  }
  if (names.empty()) throw DataError(dir + ": no .pgm frames found");
  std::sort(names.begin(), names.end());

  FrameSequence seq;
  seq.fps = fps;
  seq.frames.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    Frame frame = load_pgm((fs::path(dir) / names[i]).string());
    frame.id = i;
    frame.t_gen_ms = static_cast<double>(i) * 1000.0 / fps;
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace orbbuf
