#pragma once

#include <string>

#include "orbbuf/frame.hpp"

namespace orbbuf {

// Binary PGM (P5), maxval up to 255. '#' comments are allowed anywhere in
// the header. Throws PgmError with a distinct kind per failure mode.
Frame load_pgm(const std::string& path);

void write_pgm(const Frame& frame, const std::string& path);

// Loads every *.pgm in a directory in lexicographic filename order and
// assigns ids 0..n-1 with t_gen_ms = id * 1000 / fps. encoded_size defaults
// to the raw pixel count until a size model is applied.
FrameSequence load_sequence(const std::string& dir, double fps);

}  // namespace orbbuf
