#include <fstream>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto out = randstrat::cli::run(args);
  const std::string report = out.report.dump(2) + "\n";
  if (!out.report_path.empty()) {
    std::ofstream file(out.report_path, std::ios::binary);
    if (!file || !(file << report)) {
      std::cerr << "error: cannot write report to " << out.report_path << "\n";
      return 2;
    }
  }
  if (out.json)
    std::cout << report;
  else
    (out.exit_code == 0 ? std::cout : std::cerr) << out.text;
  return out.exit_code;
}
