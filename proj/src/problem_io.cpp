#include "hgm/problem_io.hpp"

#include <algorithm>
#include <limits>

namespace hgm {

namespace {

Rat read_rational(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) return parse_rational(v.dump());
  } catch (const ParseError& e) {
    throw ParseError(e.what(), where);
  }
  throw ParseError("expected a rational number as a string", where);
}

long read_count(const Json& v, const std::string& where) {
  if (v.is_number_unsigned() || v.is_number_integer()) {
    const auto value = v.get<long long>();
    if (value > std::numeric_limits<long>::max() / 4) throw ParseError("margin too large", where);
    return static_cast<long>(value);
  }
  if (v.is_string()) {
    const Rat q = read_rational(v, where);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw ParseError("expected an integer margin", where);
    return q.get_num().get_si();
  }
  throw ParseError("expected an integer margin", where);
}

std::vector<long> read_counts(const Json& doc, const char* key, const std::string& where) {
  const std::string here = where + "/" + key;
  if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"", here);
  const Json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError("expected an array", here);
  std::vector<long> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_count(arr[i], here + "/" + std::to_string(i)));
  return out;
}

Json rational_json(const Rat& q) { return to_exact_string(q); }

template <class T>
Json value_json(const T& v, int digits) {
  if constexpr (ScalarTraits<T>::exact)
    return to_exact_string(v);
  else
    return to_decimal(Rat(v), digits);
}

template <class T>
Json decimal_json(const T& v, int digits) {
  if constexpr (ScalarTraits<T>::exact)
    return to_decimal(v, digits);
  else
    return to_decimal(Rat(v), digits);
}

template <class T>
Json labeled_json(const LabeledMatrix<T>& m, int digits) {
  Json labels = Json::array();
  for (const IndexSet& s : m.row_labels) labels.push_back(s.str());
  Json rows = Json::array();
  for (std::size_t a = 0; a < m.size(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < m.col_labels.size(); ++b) row.push_back(value_json(m(a, b), digits));
    rows.push_back(std::move(row));
  }
  return Json{{"labels", labels}, {"matrix", rows}};
}

}  // namespace

TableProblem parse_problem(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw ParseError("expected a problem object", where.empty() ? "/" : where);
  TableProblem problem;
  problem.row_sums = read_counts(doc, "row_sums", where);
  problem.col_sums = read_counts(doc, "col_sums", where);
  const std::string here = where + "/probabilities";
  if (!doc.contains("probabilities")) throw ParseError("missing field \"probabilities\"", here);
  const Json& p = doc.at("probabilities");
  if (!p.is_array() || p.size() != problem.row_sums.size())
    throw ParseError("expected " + std::to_string(problem.row_sums.size()) + " rows of probabilities", here);
  problem.p = Matrix<Rat>(problem.row_sums.size(), problem.col_sums.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::string row_here = here + "/" + std::to_string(i);
    if (!p[i].is_array() || p[i].size() != problem.col_sums.size())
      throw ParseError("expected " + std::to_string(problem.col_sums.size()) + " probabilities", row_here);
    for (std::size_t j = 0; j < p[i].size(); ++j)
      problem.p(i, j) = read_rational(p[i][j], row_here + "/" + std::to_string(j));
  }
  return problem;
}

ProblemDocument parse_problem_document(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  }
  ProblemDocument out;
  if (doc.is_array()) {
    out.batch = true;
    if (doc.empty()) throw ParseError("empty batch", "/");
    for (std::size_t i = 0; i < doc.size(); ++i) out.problems.push_back(parse_problem(doc[i], "/" + std::to_string(i)));
  } else {
    out.problems.push_back(parse_problem(doc));
  }
  return out;
}

Json matrix_to_json(const Matrix<Rat>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
Json result_to_json(const EvalResult<T>& result, const TableProblem& problem, const EmitOptions& options) {
  const int digits = options.digits;
  const std::size_t R1 = problem.row_sums.size();
  const std::size_t R2 = problem.col_sums.size();
  Json out;
  out["z_exact"] = ScalarTraits<T>::exact ? Json(to_exact_string(result.Z)) : Json(nullptr);
  out["z_decimal"] = to_decimal(result.Z, digits);

  Json E = Json::array(), E_dec = Json::array();
  for (std::size_t i = 0; i < R1; ++i) {
    Json row = Json::array(), row_dec = Json::array();
    for (std::size_t j = 0; j < R2; ++j) {
      row.push_back(value_json(result.expectations(i, j), digits));
      row_dec.push_back(decimal_json(result.expectations(i, j), digits));
    }
    E.push_back(std::move(row));
    E_dec.push_back(std::move(row_dec));
  }
  out["expectations"] = std::move(E);
  out["expectations_decimal"] = std::move(E_dec);

  // gradients[i][j][i'][j'] = ∂E[U_ij]/∂x_{i'+1, j'+1}
  const std::size_t n = result.x ? static_cast<std::size_t>(result.x->shape().n()) : 0;
  const std::size_t k = n ? result.gradients.cols() / n : 0;
  Json G = Json::array();
  for (std::size_t i = 0; i < R1; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < R2; ++j) {
      Json cell = Json::array();
      for (std::size_t a = 0; a < k; ++a) {
        Json line = Json::array();
        for (std::size_t b = 0; b < n; ++b) line.push_back(value_json(result.gradients(i * R2 + j, a * n + b), digits));
        cell.push_back(std::move(line));
      }
      row.push_back(std::move(cell));
    }
    G.push_back(std::move(row));
  }
  out["gradients"] = std::move(G);

  Json diag;
  diag["e"] = result.path.size();
  if (options.include_path) {
    Json path = Json::array();
    for (const PathStep& s : result.path)
      path.push_back((s.direction > 0 ? "+" : "-") + std::to_string(s.index));
    diag["path"] = std::move(path);
  }
  diag["millis"] = result.millis;
  diag["backend"] = ScalarTraits<T>::exact ? "exact" : "binary64";
  if (result.alpha) {
    Json a = Json::array();
    for (const Rat& v : result.alpha->entries()) a.push_back(to_exact_string(v));
    diag["alpha"] = std::move(a);
  }
  if (result.x) diag["x"] = matrix_to_json(result.x->entries());
  Json stripped_rows = Json::array(), stripped_cols = Json::array();
  for (std::size_t i = 0; i < R1; ++i)
    if (std::find(result.kept_rows.begin(), result.kept_rows.end(), i) == result.kept_rows.end())
      stripped_rows.push_back(i + 1);
  for (std::size_t j = 0; j < R2; ++j)
    if (std::find(result.kept_cols.begin(), result.kept_cols.end(), j) == result.kept_cols.end())
      stripped_cols.push_back(j + 1);
  diag["stripped_rows"] = std::move(stripped_rows);
  diag["stripped_cols"] = std::move(stripped_cols);
  out["diagnostics"] = std::move(diag);

  if (result.oracle) {
    Json o;
    o["z_exact"] = to_exact_string(result.oracle->Z);
    o["expectations"] = matrix_to_json(result.oracle->E);
    o["match"] = result.oracle->match;
    out["oracle"] = std::move(o);
  }
  if (options.include_psi && result.x) {
    Json psi = Json::array();
    const int nn = result.x->shape().n();
    for (std::size_t t = 0; t < result.psi.size(); ++t) {
      Json entry = labeled_json(result.psi[t], digits);
      entry["i"] = t / static_cast<std::size_t>(nn) + 1;
      entry["j"] = t % static_cast<std::size_t>(nn) + 1;
      psi.push_back(std::move(entry));
    }
    out["pfaffian"] = std::move(psi);
  }
  if (result.contiguity) out["contiguity"] = labeled_json(*result.contiguity, digits);
  return out;
}

template Json result_to_json<Rat>(const EvalResult<Rat>&, const TableProblem&, const EmitOptions&);
template Json result_to_json<double>(const EvalResult<double>&, const TableProblem&, const EmitOptions&);

Json error_to_json(const Error& error) {
  Json e;
  e["kind"] = error.kind();
  e["message"] = error.what();
  if (const auto* p = dynamic_cast<const ParseError*>(&error); p && !p->location().empty()) e["location"] = p->location();
  return Json{{"error", e}};
}

int exit_code_for(const Error& error) {
  const std::string kind = error.kind();
  if (kind == "parse_error") return 2;
  if (kind == "precondition_error") return 3;
  return 4;
}

}  // namespace hgm
