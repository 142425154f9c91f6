#include "metacomb/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace metacomb {

namespace fs = std::filesystem;

const std::vector<std::string> kDefaultTaxonomy = {
    "Neutral", "Identity-directed", "Affiliation-directed", "Person-directed", "Counter Speech"};

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out << content;
        if (!out.good()) throw DataError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

// Splits file content into lines, tolerating \r\n and a missing final newline.
std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') cur.pop_back();
        lines.push_back(cur);
    }
    return lines;
}

[[noreturn]] void cell_error(const fs::path& path, std::size_t row, const std::string& column,
                             const std::string& what) {
    throw DataError(path.string() + ": row " + std::to_string(row) + ", column '" + column +
                    "': " + what);
}

double parse_score(const fs::path& path, std::size_t row, const std::string& column,
                   const std::string& cell) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || cell.empty()) {
        cell_error(path, row, column, "cannot parse '" + cell + "' as a decimal");
    }
    if (!std::isfinite(v)) cell_error(path, row, column, "non-finite score");
    if (v < 0.0 || v > 1.0) {
        cell_error(path, row, column, "score " + cell + " outside [0,1]");
    }
    return v;
}

} // namespace

PredictionTable load_predictions(const fs::path& path) {
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty()) throw DataError(path.string() + ": empty file");
    const auto header = split_line(lines[0]);
    if (header.size() < 2 || header[0] != "sample_id") {
        throw DataError(path.string() + ": header must be 'sample_id,<class>,...'");
    }

    PredictionTable table;
    table.class_names.assign(header.begin() + 1, header.end());
    table.source_model = path.stem().string();
    const std::size_t nc = table.class_names.size();

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto cells = split_line(lines[li]);
        if (cells.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(li + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        table.sample_ids.push_back(cells[0]);
        for (std::size_t c = 0; c < nc; ++c) {
            table.scores.push_back(parse_score(path, li + 1, table.class_names[c], cells[c + 1]));
        }
    }
    table.validate();
    return table;
}

void save_predictions(const PredictionTable& table, const fs::path& path) {
    table.validate();
    std::string out = "sample_id";
    for (const auto& c : table.class_names) out += "," + c;
    out += "\n";
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out += table.sample_ids[i];
        for (std::size_t c = 0; c < table.cols(); ++c) {
            out += "," + format_double(table.at(i, c));
        }
        out += "\n";
    }
    write_text_file_atomic(path, out);
}

GoldLabels load_gold(const fs::path& path) {
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty()) throw DataError(path.string() + ": empty file");
    const auto header = split_line(lines[0]);
    if (header.size() < 2 || header[0] != "sample_id") {
        throw DataError(path.string() + ": header must be 'sample_id,<class>,...[,group][,split]'");
    }

    // Optional trailing columns, recognized by their reserved names.
    std::size_t n_class_cols = header.size() - 1;
    bool has_split = false;
    bool has_group = false;
    if (n_class_cols > 0 && header.back() == "split") {
        has_split = true;
        --n_class_cols;
    }
    if (n_class_cols > 0 && header[n_class_cols] == "group") {
        has_group = true;
        --n_class_cols;
    }
    if (n_class_cols == 0) throw DataError(path.string() + ": no class columns");

    GoldLabels gold;
    std::vector<std::string> class_names(header.begin() + 1, header.begin() + 1 + n_class_cols);
    std::vector<std::vector<std::uint8_t>> rows;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto cells = split_line(lines[li]);
        if (cells.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(li + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        gold.sample_ids.push_back(cells[0]);
        std::vector<std::uint8_t> row(n_class_cols);
        for (std::size_t c = 0; c < n_class_cols; ++c) {
            const std::string& cell = cells[c + 1];
            if (cell == "0") row[c] = 0;
            else if (cell == "1") row[c] = 1;
            else cell_error(path, li + 1, class_names[c], "gold cell must be 0 or 1, got '" + cell + "'");
        }
        rows.push_back(std::move(row));
        std::size_t next = 1 + n_class_cols;
        if (has_group) {
            if (cells[next].empty()) cell_error(path, li + 1, "group", "empty group tag");
            gold.groups.push_back(cells[next]);
            ++next;
        }
        if (has_split) {
            try {
                gold.splits.push_back(parse_split(cells[next]));
            } catch (const DataError& e) {
                cell_error(path, li + 1, "split", e.what());
            }
        }
    }

    gold.labels = LabelMatrix(class_names, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < n_class_cols; ++c) gold.labels.set(i, c, rows[i][c] != 0);
    }
    gold.validate();
    return gold;
}

void save_gold(const GoldLabels& gold, const fs::path& path) {
    gold.validate();
    std::string out = "sample_id";
    for (const auto& c : gold.class_names()) out += "," + c;
    if (gold.has_groups()) out += ",group";
    if (gold.has_splits()) out += ",split";
    out += "\n";
    for (std::size_t i = 0; i < gold.rows(); ++i) {
        out += gold.sample_ids[i];
        for (std::size_t c = 0; c < gold.labels.n_classes(); ++c) {
            out += gold.labels.at(i, c) ? ",1" : ",0";
        }
        if (gold.has_groups()) out += "," + gold.groups[i];
        if (gold.has_splits()) out += std::string(",") + split_name(gold.splits[i]);
        out += "\n";
    }
    write_text_file_atomic(path, out);
}

GoldLabels binary_mapping(const GoldLabels& gold, const BinaryMappingConfig& cfg) {
    gold.validate();
    const auto contains = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    for (const auto& name : gold.class_names()) {
        if (!contains(cfg.hateful_classes, name) && !contains(cfg.non_hateful_classes, name) &&
            !contains(cfg.drop_classes, name)) {
            throw MappingError("class '" + name + "' is not covered by the binary mapping");
        }
    }

    std::vector<std::size_t> hateful_cols;
    std::vector<std::size_t> drop_cols;
    for (std::size_t c = 0; c < gold.class_names().size(); ++c) {
        const auto& name = gold.class_names()[c];
        if (contains(cfg.drop_classes, name)) drop_cols.push_back(c);
        else if (contains(cfg.hateful_classes, name)) hateful_cols.push_back(c);
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < gold.rows(); ++i) {
        bool dropped = false;
        for (std::size_t c : drop_cols) {
            if (gold.labels.at(i, c)) { dropped = true; break; }
        }
        if (!dropped) keep.push_back(i);
    }

    GoldLabels out;
    out.labels = LabelMatrix({cfg.positive_name, cfg.negative_name}, keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const std::size_t i = keep[r];
        out.sample_ids.push_back(gold.sample_ids[i]);
        bool hateful = false;
        for (std::size_t c : hateful_cols) {
            if (gold.labels.at(i, c)) { hateful = true; break; }
        }
        out.labels.set(r, 0, hateful);
        out.labels.set(r, 1, !hateful);
        if (gold.has_groups()) out.groups.push_back(gold.groups[i]);
        if (gold.has_splits()) out.splits.push_back(gold.splits[i]);
    }
    return out;
}

} // namespace metacomb
