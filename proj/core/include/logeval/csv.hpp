#ifndef LOGEVAL_CSV_HPP
#define LOGEVAL_CSV_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace logeval::csv {

// One parsed CSV record: the cell values with quoting already resolved.
using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;

    // Column index lookup by header name; empty when absent.
    [[nodiscard]] std::optional<std::size_t> column(const std::string& name) const;
};

// Validates that `data` is well-formed UTF-8.  Returns the byte offset of the
// first invalid byte, or std::nullopt when the whole buffer is valid.
[[nodiscard]] std::optional<std::size_t> find_invalid_utf8(const std::string& data);

// Parses CSV text (quoting and escaping per RFC 4180; both LF and CRLF
// accepted) into a header row plus data rows.  Throws DataError when the text
// is not valid UTF-8, when a quoted field is left unterminated, or when a row
// has a different cell count than the header.  `source` is used in error
// messages only.
[[nodiscard]] Table parse_csv(const std::string& data, const std::string& source);

// Reads a file fully into memory, transparently inflating it when the path
// ends in ".gz".  Throws DataError when the file cannot be opened or the
// compressed stream is corrupt.
[[nodiscard]] std::string read_file(const std::string& path);

// Convenience: read_file + parse_csv.
[[nodiscard]] Table read_csv(const std::string& path);

// Serializes one CSV row with minimal quoting: a cell is quoted only when it
// contains a comma, a double quote, or a line break.  The result includes the
// trailing LF.
[[nodiscard]] std::string format_row(const Row& row);

// Serializes a whole table (header first) with LF line endings.
[[nodiscard]] std::string format_table(const Table& table);

} // namespace logeval::csv

#endif // LOGEVAL_CSV_HPP
