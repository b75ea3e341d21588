#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fortsim {

struct DataPoint {
    double x = 0.0;         // SI (s, rad/s)
    double fraction = 0.0;
    double std_error = 0.0;  // 0 when noiseless

    bool operator==(const DataPoint&) const = default;
};

// One swept measurement. x is held in SI; x_unit / x_unit_scale describe how
// it is written out (x_written = x / x_unit_scale).
struct ScanDataset {
    std::string x_label;
    std::string x_unit = "s";
    double x_unit_scale = 1.0;
    // Config echo, seed and run annotations, in write order.
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<DataPoint> points;

    std::vector<double> xs() const;
    std::vector<double> fractions() const;

    bool operator==(const ScanDataset&) const = default;
};

}  // namespace fortsim
