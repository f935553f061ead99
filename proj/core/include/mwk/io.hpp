#ifndef MWK_IO_HPP
#define MWK_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mwk/dataset.hpp"

namespace mwk {

struct CsvOptions {
    /// Column holding class labels; it is excluded from the features when present.
    std::string label_column = "label";
    /// When set, a missing label column is an error.
    bool require_labels = false;
};

/// Tag opening the optional second header row carrying the 0/1 informative mask.
inline constexpr const char* kMaskTag = "#informative";

/**
 * Reads a CSV file with a header row. An optional second row starting with
 * `#informative` lists one 0/1 flag per feature column (label column skipped).
 * Labels may be integers or arbitrary strings (mapped to ids in order of appearance).
 */
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset read_csv(std::istream& in, const CsvOptions& options = {});

/// Writes the dataset in the format read_csv accepts, 17 significant digits per value.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Round-trip-exact text form of a double.
std::string format_double(double value);

struct NormalizeResult {
    Dataset data;
    /// Names of constant features that were dropped.
    std::vector<std::string> dropped;
    std::vector<std::string> warnings;
};

/// Per feature: subtract the mean, divide by (max - min). Constant features are dropped.
NormalizeResult normalize_range(const Dataset& data);

}  // namespace mwk

#endif
