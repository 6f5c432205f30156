#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "baire/eval.hpp"

namespace baire::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kData = 2,
    kInternal = 3,
};

/// Bad flags or flag values; exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data; exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pipeline settings shared by the build and compare verbs.
struct RunConfig {
    std::filesystem::path input;
    std::optional<std::string> id_column;  ///< header name or 0-based index
    std::vector<std::string> value_columns;  ///< empty: every non-id column
    int base = 10;
    int precision = 4;
    std::uint64_t seed = 1;
    std::size_t axis_count = 1;
    std::filesystem::path index_path = "index.madic";
    std::filesystem::path spec_path;  ///< empty: index path + ".proj"
};

struct CsvTable {
    std::vector<std::string> ids;
    std::vector<std::string> columns;  ///< value column names; indices when headerless
    Dataset values;
};

/// Comma-separated, decimal point only. The first row is a header when none
/// of its cells is a number. Missing, non-numeric and non-finite cells are
/// errors naming the row and column. Rows without an id column are named by
/// their 0-based data row number.
CsvTable read_csv(const std::filesystem::path& path, const std::optional<std::string>& id_column,
                  const std::vector<std::string>& value_columns);

/// Runs one command line; returns the process exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace baire::cli
