#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "problem.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nilcube: run a JSON problem description against the nilspace library"};
  std::string input = "-";
  std::string format = "json";
  std::optional<int> n_max;
  nilcube::RunOptions options;
  app.add_option("-i,--input", input, "problem file, or - for stdin");
  app.add_option("--n-max", n_max, "largest cube dimension checked (1..6)");
  app.add_option("--brute-cap", options.brute_cap, "largest |X| for brute-force translation search");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", options.seed, "seed for randomized property suites");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nilcube::kSpecError;
  }
  options.n_max = n_max;

  std::stringstream text;
  if (input == "-") {
    text << std::cin.rdbuf();
  } else {
    std::ifstream file(input);
    if (!file) {
      std::cerr << "nilcube: cannot open " << input << '\n';
      return nilcube::kSpecError;
    }
    text << file.rdbuf();
  }

  nilcube::RunResult result;
  try {
    result = nilcube::run_problem(nilcube::Json::parse(text.str()), options);
  } catch (const nilcube::Json::parse_error& e) {
    result = {nilcube::kSpecError, {{"error", {{"path", "/"}, {"message", std::string("invalid JSON: ") + e.what()}}}}};
  }
  if (format == "text") std::cout << nilcube::to_text(result.report);
  else std::cout << result.report.dump(2) << '\n';
  return result.exit_code;
}
