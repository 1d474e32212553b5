#include "ajd/csv.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace ajd {

namespace {

// One record per call; handles quoted fields, embedded delimiters/newlines and
// "" escapes. Blank lines are skipped; returns false only at end of input.
// `line` tracks the physical line number of the record start for errors.
bool read_record(std::istream &in, char delim, std::vector<std::string> &fields,
                 std::size_t &line) {
restart:
    fields.clear();
    int c = in.peek();
    if (c == EOF) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    while (true) {
        c = in.get();
        if (quoted) {
            if (c == EOF) throw Error("unterminated quoted field at line " + std::to_string(line));
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            any = true;
            continue;
        }
        if (c == EOF || c == '\n') {
            if (c == '\n') ++line;
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            if (any || fields.size() > 1 || !fields[0].empty()) return true;
            if (c == EOF) return false;
            goto restart;  // blank line between records
        }
        if (c == static_cast<unsigned char>(delim)) {
            fields.push_back(std::move(field));
            field.clear();
            any = true;
            continue;
        }
        field.push_back(static_cast<char>(c));
    }
}

}  // namespace

Relation load_csv(std::istream &in, const CsvOptions &options) {
    std::vector<std::string> fields;
    std::size_t line = 1;

    std::vector<std::string> names;
    if (options.header) {
        std::size_t header_line = line;
        if (!read_record(in, options.delimiter, fields, line))
            throw Error("empty relation: no header row");
        names = fields;
        for (const auto &n : names)
            if (n.empty()) throw Error("empty attribute name in header at line " +
                                       std::to_string(header_line));
    }

    std::vector<std::vector<std::string>> raw;
    std::size_t first_data_line = line;
    std::vector<std::size_t> record_lines;
    while (true) {
        std::size_t record_line = line;
        if (!read_record(in, options.delimiter, fields, line)) break;
        if (!raw.empty() && fields.size() != raw.front().size())
            throw Error("ragged row at line " + std::to_string(record_line) + ": expected " +
                        std::to_string(raw.front().size()) + " fields, got " +
                        std::to_string(fields.size()));
        raw.push_back(fields);
        record_lines.push_back(record_line);
    }
    if (raw.empty()) throw Error("empty relation");

    const std::size_t k = raw.front().size();
    if (options.header && names.size() != k)
        throw Error("ragged row at line " + std::to_string(first_data_line) + ": expected " +
                    std::to_string(names.size()) + " fields, got " + std::to_string(k));
    if (!options.header) {
        names.resize(k);
        for (std::size_t i = 0; i < k; ++i) names[i] = "col" + std::to_string(i);
    }

    // Build attribute domains: declared sizes take precedence, otherwise intern
    // observed labels in first-appearance order.
    std::vector<AttributeSchema::Attribute> attrs(k);
    std::vector<std::unordered_map<std::string, Value>> intern(k);
    for (std::size_t i = 0; i < k; ++i) {
        attrs[i].name = names[i];
        auto it = options.domains.find(names[i]);
        if (it != options.domains.end()) {
            attrs[i].declared = true;
            attrs[i].domain_size = it->second;
        }
    }

    std::vector<Tuple> rows;
    rows.reserve(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        Tuple t(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::string &v = raw[r][i];
            if (attrs[i].declared) {
                std::uint64_t code = 0;
                auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), code);
                if (ec != std::errc{} || p != v.data() + v.size())
                    throw Error("line " + std::to_string(record_lines[r]) + ": value '" + v +
                                "' of declared-domain attribute '" + names[i] +
                                "' is not an integer");
                if (code >= attrs[i].domain_size)
                    throw Error("line " + std::to_string(record_lines[r]) + ": value " + v +
                                " violates declared domain of '" + names[i] + "' (size " +
                                std::to_string(attrs[i].domain_size) + ")");
                t[i] = static_cast<Value>(code);
            } else {
                auto [it, inserted] = intern[i].emplace(v, static_cast<Value>(intern[i].size()));
                if (inserted) attrs[i].labels.push_back(v);
                t[i] = it->second;
            }
        }
        rows.push_back(std::move(t));
    }

    auto schema = std::make_shared<AttributeSchema>(std::move(attrs));
    return Relation(std::move(schema), std::move(rows));
}

Relation load_csv_string(const std::string &text, const CsvOptions &options) {
    std::istringstream in(text);
    return load_csv(in, options);
}

Relation load_csv_file(const std::string &path, const CsvOptions &options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open relation file '" + path + "'");
    return load_csv(in, options);
}

}  // namespace ajd
