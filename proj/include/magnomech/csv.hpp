#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace magnomech::csv {

// Shortest representation that parses back to the identical double.
std::string format_double(double v);
// Strict full-string parse; throws std::invalid_argument on trailing junk.
double parse_double(std::string_view s);

// Comma-separated table with '#'-prefixed comment lines.
struct Table {
    std::vector<std::string> comments; // comment lines without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const; // throws std::out_of_range
    double number(std::size_t row, std::string_view col) const;
    const std::string& text(std::size_t row, std::string_view col) const;

    // Comment payloads starting with `prefix` (e.g. "window:"), prefix stripped.
    std::vector<std::string> tagged(std::string_view prefix) const;
};

Table read(std::istream& in);
Table read_string(std::string_view text);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void comment(std::string_view text);
    void header(const std::vector<std::string>& cols);

    // Streams one row; cells are separated by commas.
    Writer& cell(double v);
    Writer& cell(long long v);
    Writer& cell(int v) { return cell(static_cast<long long>(v)); }
    Writer& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
    Writer& cell(std::string_view v);
    void end_row();

private:
    void sep();
    std::ostream& out_;
    bool row_open_ = false;
};

} // namespace magnomech::csv
