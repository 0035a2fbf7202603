#include "nlcl/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlcl {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string cell_field_csv(const CellField& f) {
    std::ostringstream os;
    os << "x,value\n";
    for (int j = 0; j < f.size(); ++j) {
        os << format_double(f.grid().center(j)) << ',' << format_double(f[j]) << '\n';
    }
    return os.str();
}

std::string interface_field_csv(const InterfaceField& w) {
    std::ostringstream os;
    os << "x,w\n";
    for (int k = 0; k < w.size(); ++k) {
        os << format_double(w.grid().interface(k)) << ',' << format_double(w[k]) << '\n';
    }
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    const bool local = traj.config().variant == ModelVariant::local;
    const VelocityModel& v = traj.config().velocity;
    std::ostringstream os;
    os << "t,x,q,w\n";
    for (const Snapshot& s : traj.snapshots()) {
        for (int j = 0; j < s.q.size(); ++j) {
            const double w_center = local ? v(s.q[j]) : 0.5 * (s.w[j] + s.w[j + 1]);
            os << format_double(s.time) << ',' << format_double(s.q.grid().center(j)) << ','
               << format_double(s.q[j]) << ',' << format_double(w_center) << '\n';
        }
    }
    return os.str();
}

std::string heatmap_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t";
    const GridSpec& grid = traj.config().grid;
    for (int j = 0; j < grid.n_cells(); ++j) {
        os << ',' << format_double(grid.center(j));
    }
    os << '\n';
    for (const Snapshot& s : traj.snapshots()) {
        os << format_double(s.time);
        for (int j = 0; j < s.q.size(); ++j) {
            os << ',' << format_double(s.q[j]);
        }
        os << '\n';
    }
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("write_file_atomic: cannot open " + tmp.string());
        }
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace nlcl
