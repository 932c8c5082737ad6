#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hgm/errors.hpp"
#include "hgm/hgm_engine.hpp"

namespace hgm {

using Json = nlohmann::ordered_json;

// One problem object: {"row_sums": [...], "col_sums": [...], "probabilities":
// [[...], ...]}. Probabilities are "num/den" or decimal strings; plain JSON
// numbers are read through their printed form. ParseError carries a JSON
// pointer to the offending value.
TableProblem parse_problem(const Json& doc, const std::string& where = "");

// A document holding either one problem object or an array of them.
struct ProblemDocument {
  std::vector<TableProblem> problems;
  bool batch = false;
};
ProblemDocument parse_problem_document(std::string_view text);

struct EmitOptions {
  int digits = 15;
  bool include_path = true;
  bool include_psi = false;
};

template <class T>
Json result_to_json(const EvalResult<T>& result, const TableProblem& problem, const EmitOptions& options);

Json matrix_to_json(const Matrix<Rat>& m);
Json error_to_json(const Error& error);

// Exit code for an error kind: parse 2, precondition 3, anything else 4.
int exit_code_for(const Error& error);

}  // namespace hgm
