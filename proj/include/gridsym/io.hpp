#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridsym/graph.hpp"
#include "gridsym/sparse.hpp"

namespace gridsym {

/// Matrix Market coordinate format; symmetric storage writes the lower
/// triangle only.
inline void write_matrix_market(std::ostream& os, const CsrMatrix& a, bool symmetric) {
    os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << "\n";
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (auto p = a.indptr()[static_cast<std::size_t>(i)]; p < a.indptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const auto j = a.indices()[static_cast<std::size_t>(p)];
            if (!symmetric || j <= i) ++count;
        }
    os << a.rows() << " " << a.cols() << " " << count << "\n";
    os << std::setprecision(17);
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (auto p = a.indptr()[static_cast<std::size_t>(i)]; p < a.indptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const auto j = a.indices()[static_cast<std::size_t>(p)];
            if (!symmetric || j <= i)
                os << i + 1 << " " << j + 1 << " " << a.values()[static_cast<std::size_t>(p)] << "\n";
        }
}

inline void write_vector_csv(std::ostream& os, const std::vector<double>& v) {
    os << std::setprecision(17);
    for (double x : v) os << x << "\n";
}

/// Edge list, one line per stored edge: i j weight (0-based ids).
inline void write_edge_list(std::ostream& os, const GridGraph& g) {
    os << std::setprecision(17);
    for (const auto& e : g.edges) os << e.a << " " << e.b << " " << e.w << "\n";
}

/// Node coordinates (or d-indices for pure chains) as CSV.
inline void write_node_csv(std::ostream& os, const GridGraph& g) {
    os << "id";
    for (std::size_t r = 0; r < g.dim(); ++r) os << ",k" << r + 1;
    if (g.nu > 1) os << ",slot";
    if (!g.coords.empty())
        for (std::size_t r = 0; r < g.dim(); ++r) os << ",x" << r + 1;
    os << ",kappa\n";
    os << std::setprecision(17);
    for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
        os << i;
        for (auto v : g.node_index[static_cast<std::size_t>(i)]) os << "," << v;
        if (g.nu > 1) os << "," << g.node_slot[static_cast<std::size_t>(i)];
        if (!g.coords.empty())
            for (double x : g.coords[static_cast<std::size_t>(i)]) os << "," << x;
        os << "," << g.kappa[static_cast<std::size_t>(i)] << "\n";
    }
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << content;
}

/// One CSV row per solve: experiment id, size level, dimension, method,
/// iterations, final residual metric, seconds.
inline std::string solve_report_csv_row(const std::string& experiment, std::int64_t t, std::int64_t dim,
                                        const std::string& method, std::int64_t iterations, double final_residual,
                                        double seconds) {
    std::ostringstream os;
    os << std::setprecision(17) << experiment << "," << t << "," << dim << "," << method << "," << iterations << ","
       << final_residual << "," << seconds;
    return os.str();
}

}  // namespace gridsym
