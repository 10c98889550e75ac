#pragma once

#include <string>
#include <string_view>

#include "cgambit/error.hpp"
#include "cgambit/model.hpp"

namespace cgambit {

/// Thrown when a parsed model fails validate_model.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report)
      : Error("model is invalid:\n" + report.to_string()), report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Builds a model from the JSON model format without running
/// validate_model on the result. Syntax and schema problems (unknown
/// names, wrong row arity, missing rows) throw ParseError with a
/// location; invariant violations that the data structure can represent
/// (cycles, bad row sums) are left for validate_model.
CausalModel parse_model_unchecked(std::string_view text);

/// parse_model_unchecked followed by validate_model; throws
/// ValidationError if the model is invalid.
CausalModel parse_model(std::string_view text);

/// Inverse of parse_model. Deterministic output, probabilities with 17
/// significant digits, so parse(serialize(m)) == m.
std::string serialize_model(const CausalModel& model);

CausalModel load_model(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace cgambit
