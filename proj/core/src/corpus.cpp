#include "logeval/corpus.hpp"

#include "logeval/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace logeval::corpus {

namespace {

std::size_t require_column(const csv::Table& table, const std::string& name,
                           const std::string& source) {
    auto idx = table.column(name);
    if (!idx) {
        throw DataError(source + ": missing required column '" + name + "'");
    }
    return *idx;
}

bool all_whitespace(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::int64_t parse_line_id(const std::string& cell, std::size_t row, const std::string& source) {
    std::int64_t value = 0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || value <= 0) {
        throw DataError(source + ": row " + std::to_string(row) +
                        ": line id '" + cell + "' is not a positive integer");
    }
    return value;
}

void validate_line_ids(const std::vector<LogRecord>& records, const std::string& source) {
    std::vector<char> seen(records.size(), 0);
    for (const LogRecord& rec : records) {
        if (rec.line_id < 1 || static_cast<std::size_t>(rec.line_id) > records.size()) {
            throw DataError(source + ": line id " + std::to_string(rec.line_id) +
                            " outside the contiguous range 1.." +
                            std::to_string(records.size()));
        }
        char& slot = seen[static_cast<std::size_t>(rec.line_id) - 1];
        if (slot != 0) {
            throw DataError(source + ": duplicate line id " + std::to_string(rec.line_id));
        }
        slot = 1;
    }
}

// Collects (event id -> template) pairs, rejecting conflicting strings.
class TemplateCollector {
public:
    explicit TemplateCollector(const std::string& source) : source_(source) {}

    void add(const std::string& event_id, const std::string& tpl, std::size_t row) {
        auto [it, inserted] = first_seen_.try_emplace(event_id, Entry{tpl, row});
        if (!inserted && it->second.text != tpl) {
            throw DataError(source_ + ": event id '" + event_id +
                            "' maps to conflicting templates: '" + it->second.text +
                            "' (row " + std::to_string(it->second.row) + ") vs '" + tpl +
                            "' (row " + std::to_string(row) + ")");
        }
        if (inserted) order_.push_back(event_id);
    }

    [[nodiscard]] std::vector<TemplateEntry> take() {
        std::vector<TemplateEntry> out;
        out.reserve(order_.size());
        for (const std::string& id : order_) {
            TemplateEntry entry;
            entry.event_id = id;
            entry.raw_template = first_seen_.at(id).text;
            out.push_back(std::move(entry));
        }
        return out;
    }

private:
    struct Entry {
        std::string text;
        std::size_t row;
    };
    std::string source_;
    std::unordered_map<std::string, Entry> first_seen_;
    std::vector<std::string> order_;
};

void validate_template_cover(const Corpus& corpus, const std::string& source) {
    if (corpus.parsed_templates.empty()) return;
    std::unordered_set<std::string_view> ids;
    ids.reserve(corpus.parsed_templates.size());
    for (const TemplateEntry& t : corpus.parsed_templates) {
        if (!ids.insert(t.event_id).second) {
            throw DataError(source + ": duplicate template event id '" + t.event_id + "'");
        }
    }
    for (const LogRecord& rec : corpus.records) {
        if (!ids.contains(rec.parsed_event)) {
            throw DataError(source + ": line " + std::to_string(rec.line_id) +
                            " references event '" + rec.parsed_event +
                            "' which has no template");
        }
    }
}

} // namespace

Corpus load_structured_log(const std::string& path, const ColumnMap& columns) {
    return load_structured_log(csv::read_csv(path), columns, path);
}

Corpus load_structured_log(const csv::Table& table, const ColumnMap& columns,
                           const std::string& source) {
    const std::size_t line_col = require_column(table, columns.line_id, source);
    const std::size_t content_col = require_column(table, columns.content, source);
    const std::size_t event_col = require_column(table, columns.event_id, source);
    const auto template_col = table.column(columns.event_template);

    Corpus corpus;
    corpus.records.reserve(table.rows.size());
    TemplateCollector templates(source);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const csv::Row& row = table.rows[r];
        const std::size_t file_row = r + 2;  // 1-based, after the header
        LogRecord rec;
        rec.line_id = parse_line_id(row[line_col], file_row, source);
        rec.content = row[content_col];
        rec.parsed_event = row[event_col];
        if (rec.content.empty() || all_whitespace(rec.content)) {
            throw DataError(source + ": row " + std::to_string(file_row) +
                            ": content is empty after trimming");
        }
        if (rec.parsed_event.empty()) {
            throw DataError(source + ": row " + std::to_string(file_row) + ": empty event id");
        }
        if (template_col) {
            templates.add(rec.parsed_event, row[*template_col], file_row);
        }
        corpus.records.push_back(std::move(rec));
    }
    validate_line_ids(corpus.records, source);
    corpus.parsed_templates = templates.take();
    validate_template_cover(corpus, source);
    return corpus;
}

std::vector<TemplateEntry> load_templates(const std::string& path, const ColumnMap& columns) {
    return load_templates(csv::read_csv(path), columns, path);
}

std::vector<TemplateEntry> load_templates(const csv::Table& table, const ColumnMap& columns,
                                          const std::string& source) {
    const std::size_t event_col = require_column(table, columns.event_id, source);
    const std::size_t template_col = require_column(table, columns.event_template, source);
    TemplateCollector templates(source);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const csv::Row& row = table.rows[r];
        if (row[event_col].empty()) {
            throw DataError(source + ": row " + std::to_string(r + 2) + ": empty event id");
        }
        templates.add(row[event_col], row[template_col], r + 2);
    }
    return templates.take();
}

void set_parsed_templates(Corpus& corpus, std::vector<TemplateEntry> templates) {
    Corpus probe;
    probe.records = corpus.records;
    probe.parsed_templates = std::move(templates);
    validate_template_cover(probe, "template set");
    corpus.parsed_templates = std::move(probe.parsed_templates);
}

Corpus attach_ground_truth(Corpus corpus, const Corpus& truth) {
    if (corpus.records.size() != truth.records.size()) {
        throw DataError("ground truth has " + std::to_string(truth.records.size()) +
                        " records, parsed output has " +
                        std::to_string(corpus.records.size()));
    }
    std::unordered_map<std::int64_t, const LogRecord*> truth_by_line;
    truth_by_line.reserve(truth.records.size());
    for (const LogRecord& rec : truth.records) {
        truth_by_line.emplace(rec.line_id, &rec);
    }
    // Records are validated contiguous on load, so iterating in line order
    // reports the first mismatching line id deterministically.
    std::vector<const LogRecord*> by_line(corpus.records.size(), nullptr);
    for (LogRecord& rec : corpus.records) {
        by_line[static_cast<std::size_t>(rec.line_id) - 1] = &rec;
    }
    for (std::size_t i = 0; i < by_line.size(); ++i) {
        const LogRecord& rec = *by_line[i];
        const auto it = truth_by_line.find(rec.line_id);
        if (it == truth_by_line.end()) {
            throw DataError("ground truth is missing line id " + std::to_string(rec.line_id));
        }
        if (it->second->content != rec.content) {
            throw DataError("content mismatch at line " + std::to_string(rec.line_id) +
                            ": parsed '" + rec.content + "' vs ground truth '" +
                            it->second->content + "'");
        }
    }
    for (LogRecord& rec : corpus.records) {
        rec.truth_event = truth_by_line.at(rec.line_id)->parsed_event;
    }
    corpus.truth_templates = truth.parsed_templates;
    corpus.has_truth = true;
    return corpus;
}

csv::Table to_structured_table(const Corpus& corpus, const ColumnMap& columns) {
    std::unordered_map<std::string_view, const std::string*> template_by_event;
    for (const TemplateEntry& t : corpus.parsed_templates) {
        template_by_event.emplace(t.event_id, &t.raw_template);
    }
    csv::Table table;
    table.header = {columns.line_id, columns.content, columns.event_id,
                    columns.event_template};
    table.rows.reserve(corpus.records.size());
    for (const LogRecord& rec : corpus.records) {
        const auto it = template_by_event.find(rec.parsed_event);
        const std::string tpl = it != template_by_event.end() ? *it->second : std::string();
        table.rows.push_back({std::to_string(rec.line_id), rec.content, rec.parsed_event, tpl});
    }
    return table;
}

csv::Table to_templates_table(const std::vector<TemplateEntry>& templates,
                              const ColumnMap& columns) {
    csv::Table table;
    table.header = {columns.event_id, columns.event_template};
    table.rows.reserve(templates.size());
    for (const TemplateEntry& t : templates) {
        table.rows.push_back({t.event_id, t.raw_template});
    }
    return table;
}

} // namespace logeval::corpus
