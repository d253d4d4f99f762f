// report.hpp - deterministic output: PGM/PPM rasters, run manifests, CSV
// helpers. All value formatting goes through exact integer arithmetic so that
// identical runs produce identical bytes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torus/arith.hpp"

namespace torus {

// Binary grayscale raster, intensity = floor(255*count/maxcount). Row 0 of the
// image is the y = 1 edge of the torus. `ppm` selects P6 (gray triplets)
// instead of P5.
void write_gray_raster(const std::string& path, unsigned g,
                       const std::vector<uint32_t>& hist, bool ppm = false);

struct Manifest {
    std::string subcommand;
    std::string arguments;  // full argument list as given
    std::string backend;    // "exact" | "fixed"
    int bits = 0;
    std::string s_max;      // empty when not applicable
    uint64_t seed = 0;
    bool has_seed = false;
    std::string version;
    double wall_seconds = 0;
};

// Sidecar "<output>.manifest". Identical manifests (up to wall time) must
// reproduce identical output bytes.
void write_manifest(const std::string& output_path, const Manifest& m);

constexpr const char* kToolVersion = "torus235 0.1.0";

}  // namespace torus
