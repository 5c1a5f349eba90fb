#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "polder/csv.hpp"
#include "polder/errors.hpp"

namespace polder {

struct DataPoint {
    double omega = 0.0; // rad/s
    double eps_re = 0.0;
    double eps_im = 0.0;
    double weight = 1.0;
};

/// Tabulated optical data at one temperature, the input to fitting.
struct OpticalDataset {
    double t_delta = 0.0;
    std::vector<DataPoint> points;
};

inline void check_dataset(const OpticalDataset& d) {
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        if (!(d.points[i].weight >= 0.0))
            throw domain_error("dataset point " + std::to_string(i) + ": weight must be >= 0");
        if (!(d.points[i].omega > 0.0))
            throw domain_error("dataset point " + std::to_string(i) + ": omega must be > 0");
        if (i > 0 && !(d.points[i].omega > d.points[i - 1].omega))
            throw domain_error("dataset omegas must be strictly increasing (point " + std::to_string(i) + ")");
    }
}

inline const char* dataset_header() { return "omega_rad_s,eps_re,eps_im,weight"; }

inline OpticalDataset load_dataset(const std::string& path, double t_delta = 0.0) {
    const auto table = csv::read_numeric_file(path);
    const std::vector<std::string> want{"omega_rad_s", "eps_re", "eps_im", "weight"};
    if (table.header != want)
        throw parse_error(path + ": header must be '" + dataset_header() + "'");
    OpticalDataset d;
    d.t_delta = t_delta;
    d.points.reserve(table.rows.size());
    for (const auto& r : table.rows) d.points.push_back({r[0], r[1], r[2], r[3]});
    try {
        check_dataset(d);
    } catch (const error& e) {
        throw parse_error(path + ": " + e.what());
    }
    return d;
}

inline void save_dataset(std::ostream& os, const OpticalDataset& d) {
    os << dataset_header() << '\n';
    csv::Writer w(os);
    for (const auto& p : d.points) {
        w.field(p.omega).field(p.eps_re).field(p.eps_im).field(p.weight);
        w.end_row();
    }
}

inline void save_dataset(const std::string& path, const OpticalDataset& d) {
    std::ofstream os(path);
    if (!os) throw parse_error(path + ": cannot open for writing");
    save_dataset(os, d);
}

} // namespace polder
