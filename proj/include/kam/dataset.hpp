#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kam/error.hpp"
#include "kam/matrix.hpp"

namespace kam {

// A set of decision making units: n DMUs, m inputs (x_ij), p outputs (y_ik).
// Shapes are checked on construction; value-level rules (nonnegativity, a
// positive input and output per DMU) are reported by validate_dataset.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> dmu_names,
            std::vector<std::string> input_names,
            std::vector<std::string> output_names,
            Matrix inputs,
            Matrix outputs);

    // Builds from row vectors; throws ParseError(RaggedRow) on uneven rows.
    static Dataset from_rows(std::vector<std::string> dmu_names,
                             std::vector<std::string> input_names,
                             std::vector<std::string> output_names,
                             const std::vector<std::vector<double>> &input_rows,
                             const std::vector<std::vector<double>> &output_rows);

    std::size_t size() const noexcept { return dmu_names_.size(); }
    std::size_t num_inputs() const noexcept { return input_names_.size(); }
    std::size_t num_outputs() const noexcept { return output_names_.size(); }

    const std::vector<std::string> &dmu_names() const noexcept { return dmu_names_; }
    const std::vector<std::string> &input_names() const noexcept { return input_names_; }
    const std::vector<std::string> &output_names() const noexcept { return output_names_; }

    const Matrix &inputs() const noexcept { return inputs_; }
    const Matrix &outputs() const noexcept { return outputs_; }

    std::span<const double> input_row(std::size_t dmu) const { return inputs_.row(dmu); }
    std::span<const double> output_row(std::size_t dmu) const { return outputs_.row(dmu); }

    std::optional<std::size_t> find(std::string_view dmu_name) const;

    bool operator==(const Dataset &) const = default;

private:
    std::vector<std::string> dmu_names_;
    std::vector<std::string> input_names_;
    std::vector<std::string> output_names_;
    Matrix inputs_;
    Matrix outputs_;
};

enum class IssueCode { NegativeValue, AllZeroInputs, AllZeroOutputs, RaggedRow, Empty };

enum class FactorSide { Input, Output };

struct ValidationIssue {
    IssueCode code;
    std::optional<std::size_t> dmu_index;
    std::optional<std::size_t> factor_index;
    std::optional<FactorSide> side;
    std::string message;
};

std::string_view to_string(IssueCode code) noexcept;

// Empty iff every DMU row is nonnegative with at least one positive input
// and one positive output, and n, m, p are all at least 1.
std::vector<ValidationIssue> validate_dataset(const Dataset &d);

enum class ParseFailure { Empty, MalformedHeader, NonNumeric, NegativeValue, RaggedRow, DuplicateName };

std::string_view to_string(ParseFailure kind) noexcept;

class ParseError : public Error {
public:
    ParseError(ParseFailure kind, std::size_t line, std::optional<std::size_t> column, const std::string &what);

    ParseFailure kind() const noexcept { return kind_; }
    // 1-based line of the CSV document (0 when not tied to a line).
    std::size_t line() const noexcept { return line_; }
    // 1-based column, when the failure is tied to a single cell.
    std::optional<std::size_t> column() const noexcept { return column_; }

private:
    ParseFailure kind_;
    std::size_t line_;
    std::optional<std::size_t> column_;
};

// CSV layout: header `dmu,I:<name>...,O:<name>...` (input and output columns
// may interleave), one DMU per line, comma separated, no quoting.
// Numbers are parsed locale-independently.
Dataset parse_dataset(std::string_view text);

// Inverse of parse_dataset: inputs first, then outputs; each value printed in
// shortest round-trip decimal form.
std::string serialize_dataset(const Dataset &d);

// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

} // namespace kam
