#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "ajd/relation.hpp"

namespace ajd {

struct CsvOptions {
    bool header = true;
    char delimiter = ',';
    /// Declared domain sizes by attribute name. Attributes not listed get
    /// inferred domains (the set of observed values).
    std::map<std::string, std::uint64_t> domains;
};

/// Parses RFC-4180-style delimiter-separated text into a Relation. Duplicate
/// rows are retained as multiplicities. Ragged rows and empty inputs are
/// errors; declared-domain violations are reported with the offending value.
Relation load_csv(std::istream &in, const CsvOptions &options = {});
Relation load_csv_string(const std::string &text, const CsvOptions &options = {});
Relation load_csv_file(const std::string &path, const CsvOptions &options = {});

}  // namespace ajd
