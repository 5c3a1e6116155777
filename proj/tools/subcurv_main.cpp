#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "subcurv/error.hpp"
#include "subcurv/report.hpp"
#include "subcurv/scene.hpp"

using namespace subcurv;

namespace {

struct Options {
  std::string scene;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string format = "text";
  std::string out;
  bool serial = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scene", o.scene, "scene file or bundled scene name")
      ->required();
  cmd->add_option("--seed", o.seed, "override the sampling seed");
  cmd->add_option("--tol", o.tol,
                  "override the principal tolerance of the scene kind");
  cmd->add_option("--report", o.format, "report format (default text)")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", o.out, "write the report to this file");
  cmd->add_flag("--serial", o.serial, "disable the parallel point sweep");
}

int run(const Options& o, const std::string& expect_kind, bool lax_only) {
  SceneConfig cfg = resolve_scene(o.scene);
  if (cfg.kind != expect_kind)
    throw ConfigError("scene kind is \"" + cfg.kind +
                      "\" but this command needs \"" + expect_kind + "\"");
  if (o.seed) override_seed(cfg, *o.seed);
  if (o.tol) override_tolerance(cfg, primary_tolerance_key(cfg.kind), *o.tol);
  Report rep = run_scene(cfg, !o.serial, lax_only);
  std::string text = o.format == "json" ? to_json(rep) : to_text(rep);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) throw ConfigError("cannot write " + o.out);
    f << text;
  }
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise verification of dispersionless integrability "
               "structures in five dimensions"};
  app.set_version_flag("--version", kToolVersion);
  app.footer("Exit codes: 0 all checks passed, 1 a numerical check failed,\n"
             "2 configuration error. SUBCURV_THREADS caps sweep parallelism.");
  app.require_subcommand(1);

  struct Cmd {
    const char* name;
    const char* help;
    const char* kind;
    bool lax_only;
  };
  const Cmd cmds[] = {
      {"check-pde",
       "jet projection, symbol, contact data and involutivity of a pde scene",
       "pde", false},
      {"check-master",
       "coframe, residual and determinant identities of a master scene",
       "master", false},
      {"lift-projective",
       "curvature of the spectral lift of a projective connection",
       "projective", false},
      {"contactify", "contact extension and type of a para-Kahler package",
       "para-kahler", false},
      {"lax-check", "projection and involutivity only, for a pde scene",
       "pde", true},
  };
  Options opts[5];
  CLI::App* sub[5];
  for (int i = 0; i < 5; ++i) {
    sub[i] = app.add_subcommand(cmds[i].name, cmds[i].help);
    add_common(sub[i], opts[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (int i = 0; i < 5; ++i)
      if (sub[i]->parsed()) return run(opts[i], cmds[i].kind,
                                       cmds[i].lax_only);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const UnknownIdentifier& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
