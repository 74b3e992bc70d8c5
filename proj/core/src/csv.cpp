#include "logeval/csv.hpp"

#include "logeval/errors.hpp"

#include <zlib.h>

#include <array>
#include <cstdio>
#include <memory>

namespace logeval::csv {

std::optional<std::size_t> Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> find_invalid_utf8(const std::string& data) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const std::size_t n = data.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char b = bytes[i];
        std::size_t len = 0;
        unsigned long cp = 0;
        if (b < 0x80) {
            ++i;
            continue;
        } else if ((b & 0xE0) == 0xC0) {
            len = 2;
            cp = b & 0x1Fu;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            cp = b & 0x0Fu;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            cp = b & 0x07u;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char c = bytes[i + k];
            if ((c & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (c & 0x3Fu);
        }
        // Reject overlong encodings, surrogates and out-of-range points.
        if (len == 2 && cp < 0x80) return i;
        if (len == 3 && cp < 0x800) return i;
        if (len == 4 && cp < 0x10000) return i;
        if (cp >= 0xD800 && cp <= 0xDFFF) return i;
        if (cp > 0x10FFFF) return i;
        i += len;
    }
    return std::nullopt;
}

namespace {

// RFC 4180 state machine over the whole buffer.
std::vector<Row> parse_rows(const std::string& data, const std::string& source) {
    std::vector<Row> rows;
    Row current;
    std::string cell;
    enum class State { FieldStart, Unquoted, Quoted, QuoteSeen };
    State state = State::FieldStart;
    bool row_has_content = false;

    auto end_cell = [&] {
        current.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(current));
        current.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < data.size(); ++i) {
        const char c = data[i];
        switch (state) {
        case State::FieldStart:
            if (c == '"') {
                state = State::Quoted;
                row_has_content = true;
            } else if (c == ',') {
                end_cell();
                row_has_content = true;
            } else if (c == '\n') {
                if (row_has_content || !current.empty() || !cell.empty()) end_row();
            } else if (c == '\r') {
                // consumed with the following \n; a bare \r is data
                if (i + 1 < data.size() && data[i + 1] == '\n') {
                    if (row_has_content || !current.empty() || !cell.empty()) {
                        end_row();
                    }
                    ++i;
                } else {
                    cell.push_back(c);
                    state = State::Unquoted;
                    row_has_content = true;
                }
            } else {
                cell.push_back(c);
                state = State::Unquoted;
                row_has_content = true;
            }
            break;
        case State::Unquoted:
            if (c == ',') {
                end_cell();
                state = State::FieldStart;
            } else if (c == '\n') {
                end_row();
                state = State::FieldStart;
            } else if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') {
                end_row();
                state = State::FieldStart;
                ++i;
            } else {
                cell.push_back(c);
            }
            break;
        case State::Quoted:
            if (c == '"') {
                state = State::QuoteSeen;
            } else {
                cell.push_back(c);
            }
            break;
        case State::QuoteSeen:
            if (c == '"') {
                cell.push_back('"');
                state = State::Quoted;
            } else if (c == ',') {
                end_cell();
                state = State::FieldStart;
            } else if (c == '\n') {
                end_row();
                state = State::FieldStart;
            } else if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') {
                end_row();
                state = State::FieldStart;
                ++i;
            } else {
                throw DataError(source + ": stray character after closing quote in CSV field");
            }
            break;
        }
    }
    if (state == State::Quoted) {
        throw DataError(source + ": unterminated quoted CSV field");
    }
    if (row_has_content || !cell.empty() || !current.empty()) {
        end_row();
    }
    return rows;
}

} // namespace

Table parse_csv(const std::string& data, const std::string& source) {
    if (auto bad = find_invalid_utf8(data)) {
        throw DataError(source + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
    }
    auto rows = parse_rows(data, source);
    if (rows.empty()) {
        throw DataError(source + ": empty CSV (no header row)");
    }
    Table table;
    table.header = std::move(rows.front());
    table.rows.assign(std::make_move_iterator(rows.begin() + 1),
                      std::make_move_iterator(rows.end()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != table.header.size()) {
            throw DataError(source + ": row " + std::to_string(r + 2) + " has " +
                            std::to_string(table.rows[r].size()) + " cells, expected " +
                            std::to_string(table.header.size()));
        }
    }
    return table;
}

std::string read_file(const std::string& path) {
    const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    if (gz) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (f == nullptr) {
            throw DataError(path + ": cannot open file");
        }
        std::string out;
        std::array<char, 1 << 16> buf{};
        int n = 0;
        while ((n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
            out.append(buf.data(), static_cast<std::size_t>(n));
        }
        if (n < 0) {
            int errnum = 0;
            const char* msg = gzerror(f, &errnum);
            std::string detail = msg != nullptr ? msg : "unknown zlib error";
            gzclose(f);
            throw DataError(path + ": corrupt gzip stream (" + detail + ")");
        }
        gzclose(f);
        return out;
    }
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "rb"), &std::fclose);
    if (!f) {
        throw DataError(path + ": cannot open file");
    }
    std::string out;
    std::array<char, 1 << 16> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), f.get())) > 0) {
        out.append(buf.data(), n);
    }
    if (std::ferror(f.get()) != 0) {
        throw DataError(path + ": read error");
    }
    return out;
}

Table read_csv(const std::string& path) {
    return parse_csv(read_file(path), path);
}

std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out.push_back(',');
        const std::string& cell = row[i];
        const bool needs_quotes =
            cell.find_first_of(",\"\r\n") != std::string::npos;
        if (needs_quotes) {
            out.push_back('"');
            for (char c : cell) {
                if (c == '"') out.push_back('"');
                out.push_back(c);
            }
            out.push_back('"');
        } else {
            out += cell;
        }
    }
    out.push_back('\n');
    return out;
}

std::string format_table(const Table& table) {
    std::string out = format_row(table.header);
    for (const Row& row : table.rows) {
        out += format_row(row);
    }
    return out;
}

} // namespace logeval::csv
