// Command-line front end: reads a problem document (one problem or an array
// of problems), evaluates each one and writes a JSON result document.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "hgm/problem_io.hpp"

namespace {

struct Settings {
  std::string input;
  std::string output;
  bool oracle = false;
  bool use_float = false;
  bool emit_pfaffian = false;
  int emit_contiguity = 0;
  int digits = 15;
  bool quiet = false;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw hgm::ParseError("cannot open input file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Outcome {
  hgm::Json doc;
  int code = 0;
};

template <class T>
hgm::Json run_one(const hgm::TableProblem& problem, const Settings& s) {
  hgm::EvalOptions options;
  options.oracle = s.oracle;
  options.keep_psi = s.emit_pfaffian;
  if (s.emit_contiguity > 0) options.contiguity_index = s.emit_contiguity;
  const hgm::EvalResult<T> result = hgm::evaluate<T>(problem, options);
  hgm::EmitOptions emit;
  emit.digits = s.digits;
  emit.include_path = !s.quiet;
  emit.include_psi = s.emit_pfaffian;
  hgm::Json doc = hgm::result_to_json(result, problem, emit);
  if (doc.contains("contiguity")) doc["contiguity"]["index"] = s.emit_contiguity;
  return doc;
}

Outcome evaluate_guarded(const hgm::TableProblem& problem, const Settings& s) {
  try {
    return {s.use_float ? run_one<double>(problem, s) : run_one<hgm::Rat>(problem, s), 0};
  } catch (const hgm::Error& e) {
    return {hgm::error_to_json(e), hgm::exit_code_for(e)};
  } catch (const std::exception& e) {
    const hgm::InternalError wrapped(e.what());
    return {hgm::error_to_json(wrapped), 4};
  }
}

int emit(const hgm::Json& doc, const Settings& s) {
  const std::string text = s.quiet ? doc.dump() : doc.dump(2);
  if (s.output.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(s.output);
    if (!out) {
      std::cerr << "hgm: cannot write " << s.output << '\n';
      return 4;
    }
    out << text << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact normalizing constants and expectations of two-way contingency tables"};
  Settings s;
  app.add_option("input", s.input, "problem document (JSON), or - for stdin")->required();
  app.add_option("-o,--output", s.output, "write the result document here instead of stdout");
  app.add_flag("--oracle", s.oracle, "cross-check Z and expectations by brute-force enumeration");
  app.add_flag("--float", s.use_float, "use the binary64 backend instead of exact rationals");
  app.add_flag("--emit-pfaffian", s.emit_pfaffian, "include the connection coefficient matrices");
  app.add_option("--emit-contiguity", s.emit_contiguity, "include the contiguity matrix c_i at the target parameters")
      ->check(CLI::PositiveNumber);
  app.add_option("--digits", s.digits, "significant digits of decimal output")->check(CLI::Range(1, 1000));
  app.add_flag("--quiet", s.quiet, "compact output without the path listing");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  hgm::ProblemDocument document;
  try {
    document = hgm::parse_problem_document(read_input(s.input));
  } catch (const hgm::Error& e) {
    emit(hgm::error_to_json(e), s);
    return hgm::exit_code_for(e);
  }

  if (!document.batch) {
    const Outcome o = evaluate_guarded(document.problems.front(), s);
    const int rc = emit(o.doc, s);
    return o.code ? o.code : rc;
  }

  std::vector<Outcome> outcomes(document.problems.size());
  const long count = static_cast<long>(outcomes.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < count; ++t) outcomes[static_cast<std::size_t>(t)] = evaluate_guarded(document.problems[static_cast<std::size_t>(t)], s);
  hgm::Json all = hgm::Json::array();
  int code = 0;
  for (Outcome& o : outcomes) {
    all.push_back(std::move(o.doc));
    code = std::max(code, o.code);
  }
  const int rc = emit(all, s);
  return code ? code : rc;
}
