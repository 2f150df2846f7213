#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace otto {

/// Shortest-safe text for a double: 17 significant digits, '.' separator,
/// locale-independent. Non-finite values become "inf", "-inf", "nan".
std::string format_number(double value);

/// Minimal RFC-4180 writer (CRLF records, quoting only where needed).
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<std::string_view> names);
    void header(const std::vector<std::string>& names);

    CsvWriter& field(double value);
    CsvWriter& field(long value);
    CsvWriter& field(int value) { return field(static_cast<long>(value)); }
    CsvWriter& field(std::string_view text);
    void end_row();

private:
    void separator();

    std::ostream& out_;
    bool row_started_ = false;
};

}  // namespace otto
