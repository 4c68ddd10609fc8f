// sktwb: command-line front end of the workbench.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "sktwb/workbench.hpp"

#ifndef SKT_MANIFEST_DIR
#define SKT_MANIFEST_DIR "manifests"
#endif

namespace {

std::uint64_t env_seed() {
  if (const char* s = std::getenv("SKT_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed SKT_SEED='" << s << "'\n";
    }
  }
  return sktwb::default_seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sktwb: exact SKT geometry workbench"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "structured"}));

  sktwb::RunOptions opt;
  opt.seed = env_seed();
  std::string manifest;
  std::string suite_dir = SKT_MANIFEST_DIR;
  bool update_golden = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("manifest", manifest, "manifest file (.skt)")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", opt.sets, "parameter override name=value (repeatable)");
  };
  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("validate", "load the manifest and run every structural check"));
  subs.push_back(app.add_subcommand("classify", "Kahler / strong KT / standard / balanced flags"));
  auto* coh = app.add_subcommand("cohomology", "Betti numbers of the Chevalley-Eilenberg complex");
  coh->add_flag("--invariant", opt.invariant, "also invariant Betti numbers of the group action");
  subs.push_back(coh);
  subs.push_back(app.add_subcommand("fixed-points", "fixed points of the affine torus map"));
  auto* skt = app.add_subcommand("skt-solve", "existence of an invariant strong KT metric");
  skt->add_flag("--symbolic", opt.symbolic, "keep parameters formal");
  skt->add_option("--trials", opt.trials, "random samples after the identity projection")->check(CLI::NonNegativeNumber);
  skt->add_option("--seed", opt.seed, "sampling seed (default: SKT_SEED or built-in)");
  subs.push_back(skt);
  subs.push_back(app.add_subcommand("blowup", "Poincare polynomial along the blow-up schedule"));
  for (auto* s : subs) add_common(s);
  auto* suite = app.add_subcommand("paper-suite", "run the bundled reproductions against golden reports");
  suite->add_option("--dir", suite_dir, "directory with suite.txt, *.skt and golden/")->check(CLI::ExistingDirectory);
  suite->add_flag("--update-golden", update_golden, "rewrite golden reports instead of comparing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sktwb::exit_input_error;
  }

  const bool structured = format == "structured";
  sktwb::CommandResult r;
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == suite) {
    try {
      r = sktwb::run_paper_suite(suite_dir, update_golden);
    } catch (const sktwb::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return sktwb::exit_input_error;
    }
  } else {
    r = sktwb::run_guarded(chosen->get_name(), manifest, opt);
  }
  std::cout << sktwb::render(r.report, structured);
  return r.exit_code;
}
