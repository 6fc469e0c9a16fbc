#include "magnomech/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace magnomech::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view col) const {
    return parse_double(rows.at(row).at(column(col)));
}

const std::string& Table::text(std::size_t row, std::string_view col) const {
    return rows.at(row).at(column(col));
}

std::vector<std::string> Table::tagged(std::string_view prefix) const {
    std::vector<std::string> out;
    for (const auto& c : comments) {
        if (c.rfind(prefix, 0) == 0) out.emplace_back(trim(std::string_view(c).substr(prefix.size())));
    }
    return out;
}

Table read(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        auto view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            view.remove_prefix(1);
            if (!view.empty() && view.front() == ' ') view.remove_prefix(1);
            t.comments.emplace_back(view);
            continue;
        }
        if (t.header.empty())
            t.header = split(view);
        else
            t.rows.push_back(split(view));
    }
    return t;
}

Table read_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read(in);
}

void Writer::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void Writer::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out_ << ',';
        out_ << cols[i];
    }
    out_ << '\n';
}

void Writer::sep() {
    if (row_open_) out_ << ',';
    row_open_ = true;
}

Writer& Writer::cell(double v) {
    sep();
    out_ << format_double(v);
    return *this;
}

Writer& Writer::cell(long long v) {
    sep();
    out_ << v;
    return *this;
}

Writer& Writer::cell(std::string_view v) {
    sep();
    out_ << v;
    return *this;
}

void Writer::end_row() {
    out_ << '\n';
    row_open_ = false;
}

} // namespace magnomech::csv
