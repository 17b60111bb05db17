#include "kam/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>
#include <system_error>
#include <utility>

namespace kam {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string cell_ref(std::size_t line, std::size_t column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

Dataset::Dataset(std::vector<std::string> dmu_names,
                 std::vector<std::string> input_names,
                 std::vector<std::string> output_names,
                 Matrix inputs,
                 Matrix outputs)
    : dmu_names_(std::move(dmu_names)),
      input_names_(std::move(input_names)),
      output_names_(std::move(output_names)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)) {
    if (inputs_.rows() != dmu_names_.size() || outputs_.rows() != dmu_names_.size()) {
        throw std::invalid_argument("Dataset: matrix row count differs from the number of DMU names");
    }
    if (inputs_.cols() != input_names_.size()) {
        throw std::invalid_argument("Dataset: input matrix width differs from the number of input names");
    }
    if (outputs_.cols() != output_names_.size()) {
        throw std::invalid_argument("Dataset: output matrix width differs from the number of output names");
    }
}

Dataset Dataset::from_rows(std::vector<std::string> dmu_names,
                           std::vector<std::string> input_names,
                           std::vector<std::string> output_names,
                           const std::vector<std::vector<double>> &input_rows,
                           const std::vector<std::vector<double>> &output_rows) {
    const std::size_t n = dmu_names.size();
    if (input_rows.size() != n || output_rows.size() != n) {
        throw ParseError(ParseFailure::RaggedRow, 0, std::nullopt, "row count differs from the number of DMU names");
    }
    Matrix x(n, input_names.size());
    Matrix y(n, output_names.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (input_rows[i].size() != x.cols() || output_rows[i].size() != y.cols()) {
            throw ParseError(ParseFailure::RaggedRow, 0, std::nullopt,
                             "DMU '" + dmu_names[i] + "' has a row of the wrong length");
        }
        std::copy(input_rows[i].begin(), input_rows[i].end(), x.row(i).begin());
        std::copy(output_rows[i].begin(), output_rows[i].end(), y.row(i).begin());
    }
    return Dataset(std::move(dmu_names), std::move(input_names), std::move(output_names), std::move(x), std::move(y));
}

std::optional<std::size_t> Dataset::find(std::string_view dmu_name) const {
    const auto it = std::find(dmu_names_.begin(), dmu_names_.end(), dmu_name);
    if (it == dmu_names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - dmu_names_.begin());
}

std::string_view to_string(IssueCode code) noexcept {
    switch (code) {
        case IssueCode::NegativeValue:  return "NEGATIVE_VALUE";
        case IssueCode::AllZeroInputs:  return "ALL_ZERO_INPUTS";
        case IssueCode::AllZeroOutputs: return "ALL_ZERO_OUTPUTS";
        case IssueCode::RaggedRow:      return "RAGGED_ROW";
        case IssueCode::Empty:          return "EMPTY";
    }
    return "UNKNOWN";
}

std::vector<ValidationIssue> validate_dataset(const Dataset &d) {
    std::vector<ValidationIssue> issues;
    if (d.size() == 0 || d.num_inputs() == 0 || d.num_outputs() == 0) {
        issues.push_back({IssueCode::Empty, std::nullopt, std::nullopt, std::nullopt,
                          "dataset needs at least one DMU, one input and one output (n=" + std::to_string(d.size()) +
                              ", m=" + std::to_string(d.num_inputs()) + ", p=" + std::to_string(d.num_outputs()) + ")"});
        return issues;
    }

    const auto check_side = [&](std::size_t i, std::span<const double> row, const std::vector<std::string> &names,
                                FactorSide side) {
        bool any_positive = false;
        for (std::size_t f = 0; f < row.size(); ++f) {
            if (!(row[f] >= 0.0) || !std::isfinite(row[f])) {
                issues.push_back({IssueCode::NegativeValue, i, f, side,
                                  "DMU '" + d.dmu_names()[i] + "' has invalid value " + format_number(row[f]) +
                                      " for factor '" + names[f] + "'"});
            } else if (row[f] > 0.0) {
                any_positive = true;
            }
        }
        if (!any_positive) {
            const bool in = side == FactorSide::Input;
            issues.push_back({in ? IssueCode::AllZeroInputs : IssueCode::AllZeroOutputs, i, std::nullopt, side,
                              "DMU '" + d.dmu_names()[i] + "' has no positive " + (in ? "input" : "output")});
        }
    };

    for (std::size_t i = 0; i < d.size(); ++i) {
        check_side(i, d.input_row(i), d.input_names(), FactorSide::Input);
        check_side(i, d.output_row(i), d.output_names(), FactorSide::Output);
    }
    return issues;
}

std::string_view to_string(ParseFailure kind) noexcept {
    switch (kind) {
        case ParseFailure::Empty:           return "EMPTY";
        case ParseFailure::MalformedHeader: return "MALFORMED_HEADER";
        case ParseFailure::NonNumeric:      return "NON_NUMERIC";
        case ParseFailure::NegativeValue:   return "NEGATIVE_VALUE";
        case ParseFailure::RaggedRow:       return "RAGGED_ROW";
        case ParseFailure::DuplicateName:   return "DUPLICATE_NAME";
    }
    return "UNKNOWN";
}

ParseError::ParseError(ParseFailure kind, std::size_t line, std::optional<std::size_t> column, const std::string &what)
    : Error(std::string(to_string(kind)) + ": " + what), kind_(kind), line_(line), column_(column) {}

Dataset parse_dataset(std::string_view text) {
    // Strip a UTF-8 byte order mark.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    std::vector<std::pair<std::size_t, std::string_view>> lines;
    {
        std::size_t line_no = 0;
        for (auto line : split(text, '\n')) {
            ++line_no;
            line = trim(line);
            if (!line.empty()) {
                lines.emplace_back(line_no, line);
            }
        }
    }
    if (lines.empty()) {
        throw ParseError(ParseFailure::Empty, 0, std::nullopt, "document has no header");
    }

    const auto [header_line, header_text] = lines.front();
    const auto header = split(header_text, ',');
    if (trim(header[0]) != "dmu") {
        throw ParseError(ParseFailure::MalformedHeader, header_line, 1, "first header cell must be 'dmu'");
    }

    struct Column {
        FactorSide side;
        std::size_t index;
    };
    std::vector<Column> columns;
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto cell = trim(header[c]);
        const bool is_input = cell.starts_with("I:");
        const bool is_output = cell.starts_with("O:");
        const auto name = cell.size() > 2 ? trim(cell.substr(2)) : std::string_view{};
        if ((!is_input && !is_output) || name.empty()) {
            throw ParseError(ParseFailure::MalformedHeader, header_line, c + 1,
                             "header '" + std::string(cell) + "' must be 'I:<name>' or 'O:<name>'");
        }
        auto &names = is_input ? input_names : output_names;
        columns.push_back({is_input ? FactorSide::Input : FactorSide::Output, names.size()});
        names.emplace_back(name);
    }
    if (input_names.empty() || output_names.empty()) {
        throw ParseError(ParseFailure::MalformedHeader, header_line, std::nullopt,
                         "header needs at least one 'I:' and one 'O:' column");
    }
    if (lines.size() == 1) {
        throw ParseError(ParseFailure::Empty, header_line, std::nullopt, "document has no DMU rows");
    }

    std::vector<std::string> dmu_names;
    std::set<std::string, std::less<>> seen;
    std::vector<std::vector<double>> x_rows;
    std::vector<std::vector<double>> y_rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto [line_no, line] = lines[r];
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw ParseError(ParseFailure::RaggedRow, line_no, std::nullopt,
                             "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(header.size()));
        }
        const auto name = trim(cells[0]);
        if (name.empty()) {
            throw ParseError(ParseFailure::MalformedHeader, line_no, 1, "empty DMU name at " + cell_ref(line_no, 1));
        }
        if (!seen.insert(std::string(name)).second) {
            throw ParseError(ParseFailure::DuplicateName, line_no, 1, "duplicate DMU name '" + std::string(name) + "'");
        }
        dmu_names.emplace_back(name);

        std::vector<double> x(input_names.size());
        std::vector<double> y(output_names.size());
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const auto cell = trim(cells[c]);
            double value = 0.0;
            const auto *first = cell.data();
            const auto *last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') {
                ++first;
            }
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
                throw ParseError(ParseFailure::NonNumeric, line_no, c + 1,
                                 "'" + std::string(cell) + "' is not a number (DMU '" + std::string(name) + "', " +
                                     cell_ref(line_no, c + 1) + ")");
            }
            if (value < 0.0) {
                throw ParseError(ParseFailure::NegativeValue, line_no, c + 1,
                                 "negative value " + std::string(cell) + " for DMU '" + std::string(name) +
                                     "', factor '" + std::string(trim(header[c]).substr(2)) + "'");
            }
            const auto &col = columns[c - 1];
            (col.side == FactorSide::Input ? x : y)[col.index] = value;
        }
        x_rows.push_back(std::move(x));
        y_rows.push_back(std::move(y));
    }

    return Dataset::from_rows(std::move(dmu_names), std::move(input_names), std::move(output_names), x_rows, y_rows);
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_number: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

std::string serialize_dataset(const Dataset &d) {
    std::string out = "dmu";
    for (const auto &name : d.input_names()) {
        out += ",I:" + name;
    }
    for (const auto &name : d.output_names()) {
        out += ",O:" + name;
    }
    out += '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += d.dmu_names()[i];
        for (const double v : d.input_row(i)) {
            out += ',' + format_number(v);
        }
        for (const double v : d.output_row(i)) {
            out += ',' + format_number(v);
        }
        out += '\n';
    }
    return out;
}

} // namespace kam
