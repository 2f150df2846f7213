#include "otto/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

namespace otto {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
    for (auto name : names) {
        field(name);
    }
    end_row();
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (const auto& name : names) {
        field(std::string_view{name});
    }
    end_row();
}

void CsvWriter::separator() {
    if (row_started_) {
        out_ << ',';
    }
    row_started_ = true;
}

CsvWriter& CsvWriter::field(double value) {
    separator();
    out_ << format_number(value);
    return *this;
}

CsvWriter& CsvWriter::field(long value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view text) {
    separator();
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
        out_ << text;
        return *this;
    }
    out_ << '"';
    for (char c : text) {
        if (c == '"') out_ << '"';
        out_ << c;
    }
    out_ << '"';
    return *this;
}

void CsvWriter::end_row() {
    out_ << "\r\n";
    row_started_ = false;
}

}  // namespace otto
