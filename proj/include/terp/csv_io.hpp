#pragma once

#include "terp/core_types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace terp {

// Two dataset layouts:
//   wide  - first row holds the grid times, every further row one curve
//           (Regular data; curve ids are the 1-based row numbers);
//   long  - header "curve_id,time,value", one observation per row
//           (Irregular and Fragmented data).
// Times outside [0,1] are mapped affinely onto [0,1] on load.

struct LoadedDataset {
    FunctionalDataset dataset;
    bool rescaled = false;
    double time_min = 0.0;
    double time_max = 1.0;
};

/// Reads either layout (detected from the header). `fragmented` marks
/// long-format data as Fragmented instead of inferring Regular/Irregular.
LoadedDataset read_dataset_csv(std::istream& in, bool fragmented = false);
LoadedDataset read_dataset_csv(const std::string& path, bool fragmented = false);

/// Wide layout for Regular data, long layout otherwise.
void write_dataset_csv(std::ostream& out, const FunctionalDataset& data);

/// Label file: header "curve_id,label". Reading only needs a "label" column.
void write_labels_csv(std::ostream& out, const std::vector<std::string>& ids, const Partition& partition);
std::vector<std::string> read_labels_csv(std::istream& in);
std::vector<std::string> read_labels_csv(const std::string& path);

/// Shortest round-trip text for a double.
std::string format_double(double v);

}  // namespace terp
