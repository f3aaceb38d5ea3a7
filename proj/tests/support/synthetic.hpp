#pragma once

#include <cstdint>
#include <filesystem>

#include "fragmenta/pixel_buffer.hpp"

namespace fragmenta::testing {

/// Smooth, unclipped colour field: red ramps with x, green with y, blue
/// follows a seeded radial profile. Every boundary is distinct.
PixelBuffer smooth_gradient_image(int width, int height, std::uint64_t seed);

/// Detailed photo-like image: multi-octave colour value noise, random
/// shapes, stripes and sensor grain.
PixelBuffer detailed_image(int width, int height, std::uint64_t seed);

/// Seeded uniform-random piece of side s.
PixelBuffer random_piece(int s, std::uint64_t seed);

/// Writes `count` detailed PNG images named img_000.png, ... into `dir`.
void write_detailed_corpus(const std::filesystem::path& dir, int count, int width, int height,
                           std::uint64_t seed);

}  // namespace fragmenta::testing
