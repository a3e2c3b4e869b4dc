// jspec: command-line front end. Requests are JSON documents read from a file
// argument or stdin; responses are JSON on stdout.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "jspec/cli.hpp"

namespace {

bool read_text(const std::string& path, std::string& out) {
  if (path.empty() || path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return true;
  }
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int fail(const std::string& message) {
  std::cerr << "jspec: " << message << '\n';
  std::cout << nlohmann::json{{"error", "parse-error"}, {"message", message}}.dump() << '\n';
  return jspec::cli::kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("JSPEC_MAX_SWEEPS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 100000) return fail("JSPEC_MAX_SWEEPS must be a positive integer");
    jspec::jacobi_max_sweeps() = static_cast<int>(v);
  }

  CLI::App app{"Spectral sets in Euclidean Jordan algebras"};
  app.require_subcommand(1);

  jspec::cli::Options opt;
  std::string input;
  std::string qpath_file;

  for (const auto& name : jspec::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("input", input, "request JSON file (default: stdin)");
    sub->add_option("--tolerance", opt.tolerance, "membership slack")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", opt.seed, "random seed");
    if (name == "connect") {
      sub->add_option("--steps", opt.steps, "samples per path leg")->check(CLI::Range(2, 1000000));
      sub->add_option("--qpath", qpath_file, "polyline {\"vertices\": [...]} through the eigenvalue set");
    }
    if (name == "fan" || name == "certify" || name == "pointed-check")
      sub->add_option("--samples", opt.samples, "number of random samples");
    if (name == "orbit-sample") sub->add_option("--count", opt.count, "number of orbit samples");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return jspec::cli::kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string text;
  if (!read_text(input, text)) return fail("cannot read " + input);
  if (!qpath_file.empty()) {
    std::string qtext;
    if (!read_text(qpath_file, qtext)) return fail("cannot read " + qpath_file);
    try {
      opt.q_path = nlohmann::json::parse(qtext);
    } catch (const nlohmann::json::parse_error& e) {
      return fail(std::string("malformed q-path file: ") + e.what());
    }
  }

  const auto result = jspec::cli::run_text(command, text, opt);
  std::cout << result.output.dump() << '\n';
  if (result.exit_code != jspec::cli::kOk) std::cerr << "jspec: " << result.output.value("message", "") << '\n';
  return result.exit_code;
}
