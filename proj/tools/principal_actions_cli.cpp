#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "principal_actions/principal_actions.h"

namespace {

using Json = nlohmann::json;

const char* kGrammar = R"(Polynomial expressions:
  sum of terms such as "3 - u - u^-1", "1 - u1 - u2", "4 - u1 - u1^-1 - u2 - u2^-1".
  Generators: u (alias of u1), u1, u2, u3. Powers with ^n, n may be negative.
  Products with * or juxtaposition, integer or p/q coefficients, parentheses.
  On the Heisenberg group h, products are taken in the written order.
  A value starting with '{' is read as ring element JSON instead.
Groups: z, z2, z3, z4, h.
Exit codes: 0 success, 2 a checked statement was violated, 1 any other error.)";

struct Command {
  CLI::App* app = nullptr;
  std::vector<std::function<void(Json&)>> setters;

  template <class T>
  void option(const std::string& flags, const std::string& key, const std::string& help) {
    auto value = std::make_shared<std::optional<T>>();
    app->add_option_function<T>(flags, [value](const T& v) { *value = v; }, help);
    setters.push_back([value, key](Json& cfg) {
      if (value->has_value()) cfg[key] = **value;
    });
  }
  void flag(const std::string& flags, const std::string& key, bool when_set, const std::string& help) {
    auto seen = std::make_shared<bool>(false);
    app->add_flag_callback(flags, [seen] { *seen = true; }, help);
    setters.push_back([seen, key, when_set](Json& cfg) {
      if (*seen) cfg[key] = when_set;
    });
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int exit_code(pa_status s) {
  if (s == PA_OK) return 0;
  return s == PA_ERR_LEMMA_VIOLATION ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-ring dynamics, homoclinic points, symbolic coding and entropy checks"};
  app.footer(kGrammar);
  app.require_subcommand(1);
  std::string out_path, csv_path, config_path;
  app.add_option("--out,-o", out_path, "write the JSON report here (default stdout)");
  app.add_option("--csv", csv_path, "also write tabular output as CSV");
  app.add_option("--config", config_path, "JSON config file; flags override its entries");

  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    commands.push_back(Command{app.add_subcommand(name, help), {}});
    auto& c = commands.back();
    c.app->fallthrough();
    return c;
  };
  auto add_poly = [](Command& c) {
    c.option<std::string>("--group,-g", "group", "group name");
    c.option<std::string>("--poly,-p", "poly", "polynomial expression or JSON");
  };

  {
    auto& c = add("ring", "group ring arithmetic and inverses");
    add_poly(c);
    c.option<std::string>("--op", "op", "show|mul|adjoint|split|norms|power|inverse|variety|well-balanced|alphabet");
    c.option<std::string>("--poly2", "poly2", "second factor for mul");
    c.option<int>("--exponent", "exponent", "exponent for power");
    c.option<double>("--tol", "tol", "truncation tolerance for inverse");
    c.option<std::size_t>("--max-terms", "max_terms", "Neumann series term cap");
    c.option<std::size_t>("--grid", "grid", "torus grid points per angle for variety");
    c.option<std::int64_t>("--radius", "radius", "box radius for well-balanced generation check");
  }
  {
    auto& c = add("sample", "sample a window point of X_f");
    add_poly(c);
    c.option<std::int64_t>("--radius", "radius", "window box radius");
    c.option<std::uint64_t>("--seed", "seed", "random seed (required)");
  }
  {
    auto& c = add("encode", "symbolic coding of a window point");
    add_poly(c);
    c.option<std::string>("--partition", "partition", "B or C");
    c.option<std::int64_t>("--radius", "radius", "window box radius");
    c.option<std::uint64_t>("--seed", "seed", "random seed when no input is given");
    c.option<std::string>("--input", "input", "JSON file with a torus configuration x");
  }
  {
    auto& c = add("decode", "reconstruct x from B-symbols for expansive f");
    add_poly(c);
    c.option<std::int64_t>("--radius", "radius", "window box radius for the round trip");
    c.option<double>("--tol", "tol", "inverse truncation tolerance");
    c.option<std::uint64_t>("--seed", "seed", "random seed for the round trip");
    c.option<std::string>("--input", "input", "JSON file with integer symbols z");
  }
  {
    auto& c = add("separate", "itinerary separation of sampled point pairs");
    add_poly(c);
    c.option<std::int64_t>("--radius", "radius", "horizon box radius");
    c.option<std::size_t>("--pairs", "pairs", "number of pairs");
    c.option<double>("--eps", "eps", "minimum torus distance of a kept pair");
    c.option<std::string>("--partition", "partition", "B or C");
    c.option<std::string>("--mode", "mode", "independent or perturbed");
    c.option<std::uint64_t>("--seed", "seed", "random seed (required)");
  }
  {
    auto& c = add("entropy", "entropy estimate against the Mahler measure");
    add_poly(c);
    c.option<std::int64_t>("--n", "n", "window side");
    c.option<double>("--eps", "eps", "separation scale");
    c.option<std::size_t>("--samples", "samples", "sampled points");
    c.option<std::size_t>("--particles", "particles", "ball estimator particles");
    c.option<std::size_t>("--moves", "moves", "hit-and-run moves per site");
    c.option<std::uint64_t>("--seed", "seed", "random seed (required)");
  }
  {
    auto& c = add("mahler", "Mahler measure by quadrature and roots");
    add_poly(c);
    c.option<std::size_t>("--points", "points", "quadrature points per dimension");
    c.option<std::size_t>("--lterms", "lterms", "terms of L(2, chi_3) (>= 1000)");
  }
  {
    auto& c = add("green", "Green's function of a transient random walk");
    add_poly(c);
    c.option<std::int64_t>("--radius", "radius", "box radius");
    c.option<std::string>("--method", "method", "relaxation or series");
    c.option<double>("--tol", "tol", "solver tolerance");
    c.option<std::size_t>("--terms", "terms", "series terms");
    c.flag("--doubling", "doubling", true, "also solve at half radius");
    c.flag("--no-doubling", "doubling", false, "skip the half-radius solve");
  }
  {
    auto& c = add("homoclinic", "Heisenberg homoclinic residuals");
    c.app->add_flag("--heisenberg", "accepted for clarity; the construction lives on the Heisenberg group");
    c.option<std::size_t>("--J", "J", "largest truncation");
    c.option<std::int64_t>("--window", "window", "x/y window radius");
    c.option<std::int64_t>("--zwindow", "zwindow", "z window radius (default window^2)");
    c.option<std::vector<std::size_t>>("--checkpoints", "checkpoints", "truncations to report");
  }
  {
    auto& c = add("multiplier", "cubic multiplier series");
    c.option<std::size_t>("--K", "K", "outer truncation");
    c.option<double>("--tol", "tol", "pruning tolerance");
    c.option<std::int64_t>("--window", "window", "x/y window radius");
    c.flag("--control", "control", true, "run the r = 0 control");
  }
  {
    auto& c = add("decay", "decay of (1-c)^k |phi_k|(c)");
    c.option<double>("--c", "c", "parameter in (0,1)");
    c.option<long>("--kmin", "kmin", "smallest k");
    c.option<long>("--kmax", "kmax", "largest k");
    c.option<long>("--points", "points", "sample count");
    c.flag("--no-compare", "compare", false, "skip the closed-form comparison");
  }
  {
    auto& c = add("verify", "executable lemma checks");
    c.option<std::string>("--lemma", "lemma", "sauer-shelah|stirling|sign-pattern|vq|gk-roots|gk-identity|combinatorial|all");
    c.option<std::size_t>("--seeds", "seeds", "trials per check");
    c.option<std::uint64_t>("--seed", "seed", "base seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) chosen = &c;
  const std::string name = chosen->app->get_name();

  std::unique_ptr<pa_context, decltype(&pa_context_free)> ctx(nullptr, &pa_context_free);
  try {
    Json cfg = Json::object();
    if (!config_path.empty()) {
      cfg = Json::parse(read_file(config_path));
      if (!cfg.is_object()) throw std::runtime_error("config file must hold a JSON object");
      if (cfg.contains("config")) cfg = cfg.at("config");  // accept a whole report
    }
    for (const auto& set : chosen->setters) set(cfg);
    if (cfg.contains("input") && cfg["input"].is_string()) cfg["input"] = read_file(cfg["input"].get<std::string>());

    pa_context* raw = nullptr;
    if (pa_context_new(&raw) != PA_OK) throw std::runtime_error("cannot create context");
    ctx.reset(raw);
    char* report = nullptr;
    pa_status s = pa_run(ctx.get(), name.c_str(), cfg.dump().c_str(), &report);
    if (s != PA_OK) {
      std::cerr << "error: " << pa_last_error(ctx.get()) << "\n";
      return exit_code(s);
    }
    std::string text(report);
    pa_string_free(report);
    text += "\n";
    write_output(out_path, text);
    if (!csv_path.empty()) {
      char* csv = nullptr;
      s = pa_report_csv(ctx.get(), name.c_str(), text.c_str(), &csv);
      if (s != PA_OK) {
        std::cerr << "error: " << pa_last_error(ctx.get()) << "\n";
        return exit_code(s);
      }
      write_output(csv_path, csv);
      pa_string_free(csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
