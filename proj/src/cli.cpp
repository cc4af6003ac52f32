#include "sdr/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdr/constructions.hpp"
#include "sdr/feasibility.hpp"
#include "sdr/grid.hpp"
#include "sdr/model.hpp"
#include "sdr/verify.hpp"

namespace sdr {

namespace {

struct Options {
  std::string model_path;
  std::string set_name;
  std::vector<std::string> points;
  std::string bounds = "-1.5:1.5,-1.5:1.5";
  int res = 101;
  std::string out_path;
  std::string format = "both";
  std::string campaign;
  int samples = 200;
  // engine knobs (out_threshold tracks 2*tol_feas)
  double lmax = 1e6;
  double tol = 1e-7;
  int max_iter = 5000;
  std::uint64_t seed = 0;
};

void add_engine_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lmax", o.lmax, "Box limit for free variables");
  cmd->add_option("--tol", o.tol,
                  "Feasibility tolerance (Out threshold is twice this)");
  cmd->add_option("--max-iter", o.max_iter, "Newton step budget per query");
  cmd->add_option("--seed", o.seed, "Seed for feasible-point sampling");
}

EngineConfig engine_config(const Options& o) {
  EngineConfig cfg;
  cfg.lambda_max = o.lmax;
  cfg.tol_feas = o.tol;
  cfg.out_threshold = 2.0 * o.tol;
  cfg.max_iter = o.max_iter;
  cfg.seed = o.seed;
  return validated(cfg);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidInput, "cannot read file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidInput, "cannot write file " + path);
  out << content;
  if (!out) fail(ErrorCode::InvalidInput, "failed writing file " + path);
}

ModelElaborator load(const Options& o, std::ostream& err) {
  const SetModel model = parse_model(read_file(o.model_path));
  for (const auto& w : model.warnings) err << "warning: " << w << "\n";
  return ModelElaborator(model, engine_config(o));
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  ModelElaborator elab = load(o, err);
  const SemidefRepresentation& s = elab.elaborate(o.set_name);
  const EngineConfig cfg = engine_config(o);
  bool any_unknown = false;
  for (const auto& text : o.points) {
    const Assignment x = parse_point(text);
    const Verdict v = membership(s, x, cfg);
    bool first = true;
    for (const auto& [name, value] : x) {
      out << (first ? "" : " ") << name << "=" << format_double(value);
      first = false;
    }
    out << ": " << verdict_name(v.kind);
    if (v.kind == VerdictKind::In)
      out << " (margin " << format_double(v.margin) << ")";
    else
      out << " (residual " << format_double(v.residual) << ")";
    out << "\n";
    if (v.kind == VerdictKind::Unknown) any_unknown = true;
  }
  return any_unknown ? 2 : 0;
}

int cmd_grid(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format != "csv" && o.format != "svg" && o.format != "both")
    fail(ErrorCode::InvalidInput,
         "format must be csv, svg or both, got " + o.format);
  ModelElaborator elab = load(o, err);
  const SemidefRepresentation& s = elab.elaborate(o.set_name);
  const Bounds bounds = parse_bounds(o.bounds);
  const GridReport report = rasterize(s, bounds, o.res, engine_config(o));

  std::vector<std::string> written;
  if (o.format == "csv") {
    write_file(o.out_path, to_csv(report));
    written.push_back(o.out_path);
  } else if (o.format == "svg") {
    write_file(o.out_path, to_svg(report));
    written.push_back(o.out_path);
  } else {
    write_file(o.out_path + ".csv", to_csv(report));
    write_file(o.out_path + ".svg", to_svg(report));
    written.push_back(o.out_path + ".csv");
    written.push_back(o.out_path + ".svg");
  }

  out << "grid " << o.res << "x" << o.res << " of " << o.set_name << ": "
      << report.in_count << " in, " << report.out_count << " out, "
      << report.unknown_count << " unknown (" << format_double(report.seconds)
      << " s)\n";
  for (const auto& path : written) out << "wrote " << path << "\n";
  return report.unknown_count > 0 ? 2 : 0;
}

int cmd_info(const Options& o, std::ostream& out, std::ostream& err) {
  ModelElaborator elab = load(o, err);
  for (const auto& name : elab.closure(o.set_name)) {
    const SemidefRepresentation& s = elab.elaborate(name);
    const ConstructionReport r = describe(s);
    out << name << ": dim " << r.output_dim << ", visible "
        << r.visible_count << " (";
    for (size_t i = 0; i < s.visible.size(); ++i)
      out << (i ? ", " : "") << s.visible[i];
    out << "), auxiliary " << r.auxiliary_count;
    if (s.relint_count > 0)
      out << " (" << r.auxiliary_count - s.relint_count
          << " after merging one gadget bound per relint)";
    out << " -- " << r.provenance << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const CampaignReport report =
      run_campaign(o.campaign, o.samples, engine_config(o));
  for (const auto& line : report.jsonl) out << line << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

Assignment parse_point(const std::string& text) {
  Assignment point;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      fail(ErrorCode::InvalidInput,
           "point coordinates must be name=value, got \"" + item + "\"");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      fail(ErrorCode::InvalidInput,
           "bad coordinate value \"" + value + "\" for " + name);
    if (!point.emplace(name, v).second)
      fail(ErrorCode::InvalidInput, "duplicate coordinate " + name);
    pos = comma + 1;
  }
  if (point.empty())
    fail(ErrorCode::InvalidInput, "empty point specification");
  return point;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"Semidefinite representations of convex sets: build block"
               " pencils from set models, decide membership, render grids,"
               " and cross-check the engine against geometric oracles."};
  app.require_subcommand(1);

  CLI::App* check = app.add_subcommand(
      "check", "Decide membership of explicit points");
  check->add_option("--model", o.model_path, "Model JSON file")->required();
  check->add_option("--set", o.set_name, "Set name in the model")->required();
  check
      ->add_option("--point", o.points,
                   "Point as name=value[,name=value...]; repeatable")
      ->required();
  add_engine_flags(check, o);

  CLI::App* grid = app.add_subcommand(
      "grid", "Rasterize membership over a rectangle");
  grid->add_option("--model", o.model_path, "Model JSON file")->required();
  grid->add_option("--set", o.set_name, "Set name in the model")->required();
  grid->add_option("--bounds", o.bounds, "x0:x1,y0:y1 rectangle");
  grid->add_option("--res", o.res, "Grid resolution per axis");
  grid->add_option("--out", o.out_path, "Output path")->required();
  grid->add_option("--format", o.format, "csv, svg or both");
  add_engine_flags(grid, o);

  CLI::App* info = app.add_subcommand(
      "info", "Describe a set and everything it is built from");
  info->add_option("--model", o.model_path, "Model JSON file")->required();
  info->add_option("--set", o.set_name, "Set name in the model")->required();
  add_engine_flags(info, o);

  CLI::App* verify = app.add_subcommand(
      "verify", "Run an engine-versus-oracle campaign");
  verify->add_option("campaign", o.campaign, "albert, relint, facechar or looparrow")
      ->required();
  verify->add_option("--samples", o.samples, "Randomized trials to run");
  add_engine_flags(verify, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "UsageError: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(check)) return cmd_check(o, out, err);
    if (app.got_subcommand(grid)) return cmd_grid(o, out, err);
    if (app.got_subcommand(info)) return cmd_info(o, out, err);
    return cmd_verify(o, out);
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sdr
