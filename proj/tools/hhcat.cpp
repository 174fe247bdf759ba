// hhcat: batch front end over problem files.
//
//   hhcat <command> PROBLEM.yaml [--max-degree N] [--field rationals|fp:P]
//         [--q VALUE] [--report PATH] [--budget ENTRIES] [--path a,b,...]
//
// Exit codes: 0 success, 1 input error, 2 budget exceeded, 3 internal
// consistency failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hhcat/commands.hpp"

namespace {

struct Args {
  std::string problem;
  std::size_t max_degree = 4;
  bool max_degree_given = false;
  std::string field;
  std::string q;
  std::string report;
  std::size_t budget = hhcat::kDefaultBudget;
  std::vector<std::string> path;
};

void write_report(const std::string& path, const hhcat::Json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw hhcat::ParseError("cannot write report '" + path + "'");
  out << j.dump(2) << "\n";
}

int run(const std::string& command, const Args& a) {
  std::string problem_name = a.problem;
  try {
    auto p = hhcat::load_problem(a.problem);
    problem_name = p.name;
    if (command == "canonical") {
      std::cout << hhcat::emit_problem(p);
      return 0;
    }
    hhcat::RunOptions o;
    o.max_degree = a.max_degree_given ? a.max_degree : p.max_degree.value_or(4);
    o.budget = a.budget;
    if (!a.q.empty()) o.q = a.q;
    o.path = a.path;
    std::string field = a.field.empty() ? p.field : a.field;
    if (!a.q.empty()) hhcat::Rational::parse(a.q);

    hhcat::Report r;
    if (field == "rationals") {
      r = hhcat::run_command<hhcat::Rational>(command, p, o, field);
    } else if (field.rfind("fp:", 0) == 0) {
      std::uint32_t prime = 0;
      try {
        prime = static_cast<std::uint32_t>(std::stoul(field.substr(3)));
      } catch (const std::exception&) {
        throw hhcat::ParseError("bad field '" + field + "'");
      }
      hhcat::ModP::Scope scope(prime);
      r = hhcat::run_command<hhcat::ModP>(command, p, o, field);
    } else {
      throw hhcat::ParseError("field must be 'rationals' or 'fp:P', got '" + field + "'");
    }
    std::cout << r.text;
    write_report(a.report, r.json);
    return r.status;
  } catch (const hhcat::Error& e) {
    std::cerr << "hhcat " << command << ": " << e.what() << "\n";
    try {
      write_report(a.report, hhcat::error_report(command, problem_name, e.kind(), e.what(), e.exit_code()));
    } catch (const hhcat::Error&) {
    }
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "hhcat " << command << ": internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hochschild cohomology of algebras built from Q-sets"};
  app.require_subcommand(1);
  Args args;
  std::string chosen;
  auto commands = hhcat::command_names();
  commands.push_back("canonical");
  for (auto& name : commands) {
    auto* sub = app.add_subcommand(name, name == "canonical" ? "print the problem file in canonical form" : "");
    sub->add_option("problem", args.problem, "problem file")->required();
    if (name == "canonical") {
      sub->callback([&, name] { chosen = name; });
      continue;
    }
    sub->add_option_function<std::size_t>(
        "--max-degree", [&](std::size_t n) { args.max_degree = n, args.max_degree_given = true; },
        "highest cohomological degree (default 4)");
    sub->add_option("--field", args.field, "rationals or fp:P");
    sub->add_option("--q", args.q, "value of q for quantum algebras");
    sub->add_option("--report", args.report, "write the JSON report here");
    sub->add_option("--budget", args.budget, "cap on matrix entries");
    if (name == "along-path") sub->add_option("--path", args.path, "arrow labels in composition order")->delimiter(',');
    sub->callback([&, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return run(chosen, args);
}
