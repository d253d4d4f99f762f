#include "torus/report.hpp"

#include <cstdio>
#include <fstream>

namespace torus {

void write_gray_raster(const std::string& path, unsigned g,
                       const std::vector<uint32_t>& hist, bool ppm) {
    if (g < 1 || g > 4096) throw precondition_error("raster: G must be in [1, 4096]");
    if (hist.size() != static_cast<size_t>(g) * g)
        throw precondition_error("raster: histogram size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("raster: cannot open " + path);

    uint32_t maxc = 0;
    for (uint32_t c : hist) maxc = std::max(maxc, c);

    out << (ppm ? "P6\n" : "P5\n");
    out << "# row 0 is the y=1 edge; cell (i,j) of [0,1)^2 maps to column i, row G-1-j\n";
    out << g << " " << g << "\n255\n";
    for (unsigned r = 0; r < g; ++r) {
        unsigned j = g - 1 - r;
        for (unsigned i = 0; i < g; ++i) {
            uint32_t c = hist[static_cast<size_t>(j) * g + i];
            unsigned char v =
                maxc == 0 ? 0
                          : static_cast<unsigned char>((255ULL * c) / maxc);
            if (ppm) {
                out.put(static_cast<char>(v));
                out.put(static_cast<char>(v));
            }
            out.put(static_cast<char>(v));
        }
    }
    if (!out) throw std::runtime_error("raster: write failed for " + path);
}

void write_manifest(const std::string& output_path, const Manifest& m) {
    std::ofstream out(output_path + ".manifest");
    if (!out) throw std::runtime_error("manifest: cannot open " + output_path + ".manifest");
    out << "subcommand=" << m.subcommand << "\n";
    out << "arguments=" << m.arguments << "\n";
    out << "backend=" << m.backend << "\n";
    out << "bits=" << m.bits << "\n";
    if (!m.s_max.empty()) out << "s_max=" << m.s_max << "\n";
    if (m.has_seed) out << "seed=" << m.seed << "\n";
    out << "version=" << m.version << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", m.wall_seconds);
    out << "wall_seconds=" << buf << "\n";
}

}  // namespace torus
