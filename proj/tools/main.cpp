#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzzylim/cli.hpp"

namespace cli = fuzzylim::cli;

int main(int argc, char** argv) {
  CLI::App app{"fuzzylim: defects of convergence, (q, r)-limits, certificates and omega-automata"};
  app.require_subcommand(1);
  std::string format = "terse";
  std::string output;
  app.add_option("--format", format, "report detail")->check(CLI::IsMember({"terse", "full"}));
  app.add_option("--output", output, "write the report here instead of stdout");

  struct Bound {
    CLI::App* sub;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> params;
  };
  std::vector<Bound> bound;
  bound.reserve(cli::verbs().size());
  for (const auto& v : cli::verbs()) {
    bound.push_back({app.add_subcommand(v.name, v.summary), {}, {}});
    auto& b = bound.back();
    b.sub->add_option("inputs", b.inputs, "input file(s)")->required();
    b.sub->add_option("--format", format, "report detail")->check(CLI::IsMember({"terse", "full"}));
    b.sub->add_option("--output", output, "write the report here instead of stdout");
    for (const auto& p : v.required) b.sub->add_option("--" + p, b.params[p])->required();
    for (const auto& p : v.optional) b.sub->add_option("--" + p, b.params[p]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_bad_input;
  }

  cli::CommandRequest req;
  req.format = format == "full" ? cli::Format::full : cli::Format::terse;
  for (std::size_t i = 0; i < bound.size(); ++i) {
    if (!bound[i].sub->parsed()) continue;
    const auto& spec = cli::verbs()[i];
    req.verb = spec.name;
    req.inputs = bound[i].inputs;
    for (const auto& [k, v] : bound[i].params)
      if (bound[i].sub->count("--" + k)) req.params[k] = v;
  }

  auto report = cli::execute(req);
  std::string text = report.render();
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return cli::exit_other;
    }
    out << text;
  }
  return report.status;
}
