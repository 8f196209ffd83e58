// Command-line front end for the .kg analysis toolkit.
//
// Exit codes: 0 = every verdict conclusive, 2 = some verdict Unknown,
// 1 = parse/validation/usage failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kgraph/kgraph.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kgraph::BadParams("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int finish(const kgraph::Report& rep, const std::string& report_path,
           bool json_stdout) {
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << kgraph::emit_json(rep);
  }
  std::cout << (json_stdout ? kgraph::emit_json(rep)
                            : kgraph::emit_text(rep));
  return rep.any_unknown() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"higher-rank graph structure analyzer"};
  app.require_subcommand(1);

  std::string file, report_path, max_degree, window_spec, target = "graph";
  std::string matrix_n;
  bool json_stdout = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "input .kg file")->required();
    cmd->add_option("--report", report_path, "write the JSON report here");
    cmd->add_flag("--json", json_stdout, "print JSON instead of text");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate");
  add_common(validate);

  CLI::App* analyze =
      app.add_subcommand("analyze", "run the file's analysis directives");
  add_common(analyze);
  analyze->add_option("--max-degree", max_degree,
                      "override the pair box, e.g. 3,3");

  CLI::App* matrices =
      app.add_subcommand("matrices", "print component matrices");
  add_common(matrices);
  matrices->add_option("-N,--power", matrix_n, "also print M^N, e.g. 2,1");

  CLI::App* skew = app.add_subcommand(
      "skew", "materialize the skew product over a window");
  add_common(skew);
  skew->add_option("--window", window_spec,
                   "window spec: lo..hi[,lo..hi...], all, or len:N");

  CLI::App* simplicity =
      app.add_subcommand("simplicity", "simplicity verdict for an algebra");
  add_common(simplicity);
  simplicity
      ->add_option("--target", target,
                   "graph | af-core | skew | fixed-point")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    kgraph::KgDocument doc = kgraph::parse_kg(slurp(file));
    if (!window_spec.empty()) doc.window = window_spec;

    if (validate->parsed()) {
      doc.directives.clear();
      kgraph::KgDocument::Directive d;
      d.name = "validate";
      doc.directives.push_back(d);
    } else if (matrices->parsed()) {
      doc.directives.clear();
      kgraph::KgDocument::Directive d;
      d.name = "matrices";
      if (!matrix_n.empty()) d.options["N"] = matrix_n;
      doc.directives.push_back(d);
    } else if (skew->parsed()) {
      doc.directives.clear();
      kgraph::KgDocument::Directive d;
      d.name = "skew";
      doc.directives.push_back(d);
    } else if (simplicity->parsed()) {
      doc.directives.clear();
      kgraph::KgDocument::Directive d;
      d.name = "simplicity";
      d.options["target"] = target;
      doc.directives.push_back(d);
    } else if (analyze->parsed() && !max_degree.empty()) {
      for (auto& d : doc.directives) d.options["max-degree"] = max_degree;
    }

    kgraph::Report rep = kgraph::run_document(doc, file);
    if (validate->parsed() && !rep.results.empty() &&
        rep.results[0].verdict.fails()) {
      std::cout << kgraph::emit_text(rep);
      return 1;
    }
    return finish(rep, report_path, json_stdout);
  } catch (const kgraph::ParseError& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return 1;
  } catch (const kgraph::Error& e) {
    std::cerr << file << ": error: " << e.what() << "\n";
    return 1;
  }
}
