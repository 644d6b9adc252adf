#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bge/expansion.hpp"
#include "bge/experiments.hpp"
#include "bge/hull.hpp"
#include "bge/veronese.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kExpectationFailed = 1, kUsage = 2, kOverflow = 3;

struct GlobalOpts {
  std::string config_file;
  ordered_json config;

  void load() {
    if (config_file.empty()) return;
    std::ifstream in(config_file);
    if (!in) throw bge::contract_violation("cannot open config file: " + config_file);
    in >> config;
  }
  // config value for options the user did not pass on the command line
  template <class T>
  void fill(const CLI::Option* opt, const std::string& key, T& value) {
    if (opt->count() == 0 && config.contains(key)) value = config[key].get<T>();
  }
};

std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void emit_kv(const ordered_json& values, const std::string& emit) {
  if (emit == "json") {
    std::cout << values.dump(2) << "\n";
    return;
  }
  std::vector<std::string> fields =
      emit.empty() || emit == "all" ? std::vector<std::string>{} : split_fields(emit);
  if (fields.empty())
    for (auto& [k, v] : values.items()) std::cout << k << "=" << v.dump() << "\n";
  else
    for (auto& f : fields) {
      if (!values.contains(f)) throw bge::contract_violation("unknown field: " + f);
      std::cout << f << "=" << values[f].dump() << "\n";
    }
}

int cmd_shadow(const std::string& building, int j, const std::string& emit) {
  auto b = bge::parse_building(building);
  auto sg = bge::shadow_geometry(b, j);
  if (emit == "json") {
    ordered_json out;
    out["building"] = building;
    out["j"] = j;
    out["counts"] = {{"points", sg.points.size()},
                     {"lines", sg.lines.size()},
                     {"planes", sg.planes.size()}};
    bge::PointLineGeometry pl;
    pl.num_points = static_cast<int>(sg.points.size());
    for (auto& l : sg.lines) pl.lines.push_back(l.points);
    out["point_line_system"] = bge::geometry_to_json(pl);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "points=" << sg.points.size() << "\nlines=" << sg.lines.size()
              << "\nplanes=" << sg.planes.size() << "\n";
  }
  return kOk;
}

int cmd_far(const std::string& building, int j, int astar, const std::string& emit) {
  auto b = bge::parse_building(building);
  int opt = b->opposite_type(j);
  const auto& elems = b->elements_of_type(opt);
  bge::BuildingFlag asf;
  if (astar < 0) {
    asf = b->standard_pair(j).second;
  } else {
    if (astar >= static_cast<int>(elems.size()))
      throw bge::contract_violation("--astar index out of range");
    asf = bge::flag_of(*b, elems[astar]);
  }
  auto far = bge::far_truncation(b, j, asf);
  ordered_json out;
  out["points"] = far.points.size();
  out["lines"] = far.lines.size();
  out["planes"] = far.planes.size();
  out["star_condition"] = far.star_ok;
  if (!far.star_ok) out["warning"] = "residue-parameter condition fails; geometry may disconnect";
  emit_kv(out, emit == "counts" ? "" : emit);
  return kOk;
}

int cmd_unipotent(const std::string& building, int j, const std::string& emit) {
  auto b = bge::parse_building(building);
  auto rep = bge::unipotent_rep(b, j);
  ordered_json out;
  out["order"] = rep.U->size();
  out["abelian"] = rep.emb.abelian;
  out["derived-order"] = bge::derived_subgroup(*rep.U).size();
  out["points"] = rep.emb.geom.num_points;
  out["lines"] = rep.emb.geom.lines.size();
  emit_kv(out, emit);
  return kOk;
}

int cmd_veronese(const std::string& kind, int n, int q, const std::string& emit) {
  bge::GroupEmbedding e;
  if (kind == "quadratic")
    e = bge::veronese_quadratic(n, q);
  else if (kind == "hermitian")
    e = bge::veronese_hermitian(n, q);
  else if (kind == "wedge")
    e = bge::wedge_embedding(n, q);
  else
    throw bge::contract_violation("unknown veronese kind: " + kind);
  if (emit == "amalgam") {
    std::cout << bge::amalgam_to_string(bge::build_presentation(e));
    return kOk;
  }
  ordered_json out;
  out["points"] = e.geom.num_points;
  out["lines"] = e.geom.lines.size();
  out["codomain_order"] = e.codomain->size();
  out["abelian_dim"] = bge::abelian_hull_dim(e);
  emit_kv(out, emit == "dims" ? "" : emit);
  return kOk;
}

int cmd_hull(const std::string& file, long max_cosets, const std::string& emit) {
  std::ifstream in(file);
  if (!in) throw bge::contract_violation("cannot open amalgam file: " + file);
  std::stringstream buf;
  buf << in.rdbuf();
  auto pres = bge::amalgam_from_string(buf.str());
  auto r = bge::todd_coxeter(pres, max_cosets);
  if (r.status == bge::TCStatus::overflowed) {
    std::cerr << "coset enumeration overflowed; high water " << r.high_water << " cosets\n";
    return kOverflow;
  }
  ordered_json out;
  out["order"] = r.order;
  out["abelian"] = bge::is_elementary_abelian(r, pres);
  out["table-hash"] = bge::table_hash(r);
  out["cosets-defined"] = r.defined;
  emit_kv(out, emit);
  return kOk;
}

int cmd_list(bool as_json) {
  auto cat = bge::list_experiments();
  if (as_json) {
    ordered_json out = ordered_json::array();
    for (auto& e : cat)
      out.push_back({{"name", e.name}, {"description", e.description}, {"claim", e.claim}});
    std::cout << out.dump(2) << "\n";
  } else {
    for (auto& e : cat) std::cout << e.name << "\n    " << e.description << "\n";
  }
  return kOk;
}

int cmd_run(std::vector<std::string> names, bool all, bool parallel, const std::string& emit,
            long max_cosets) {
  if (all) {
    names.clear();
    for (auto& e : bge::list_experiments()) names.push_back(e.name);
  }
  if (names.empty()) throw bge::contract_violation("no experiment named; use --all or pass names");
  bge::ExperimentConfig cfg;
  cfg.max_cosets = max_cosets;

  std::vector<bge::ExperimentResult> results(names.size());
  if (parallel) {
    std::vector<std::future<bge::ExperimentResult>> futs;
    for (auto& n : names)
      futs.push_back(
          std::async(std::launch::async, [n, cfg] { return bge::run_experiment(n, cfg); }));
    for (size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < names.size(); ++i) results[i] = bge::run_experiment(names[i], cfg);
  }

  bool ok = true;
  if (emit == "csv") {
    std::cout << "experiment,key,value\n";
    for (auto& r : results) {
      for (auto& [k, v] : r.values.items())
        std::cout << r.name << "," << k << "," << v.dump() << "\n";
      std::cout << r.name << ",pass," << (r.pass ? "true" : "false") << "\n";
      ok = ok && r.pass;
    }
  } else {
    ordered_json out = ordered_json::array();
    for (auto& r : results) {
      out.push_back(r.to_json());
      ok = ok && r.pass;
    }
    std::cout << (results.size() == 1 ? out[0].dump(2) : out.dump(2)) << "\n";
  }
  return ok ? kOk : kExpectationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite classical buildings, shadow geometries, group embeddings and their hulls"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--config", g.config_file, "JSON config file (defaults below CLI flags)");

  std::string building = "C3(2)", emit, kind = "quadratic", amalgam_file;
  int j = 3, n = 3, q = 2, astar = -1;
  long max_cosets = 1L << 20;
  bool as_json = false, all = false, parallel = false;
  std::vector<std::string> names;

  auto* shadow = app.add_subcommand("shadow", "shadow geometry counts of a building");
  shadow->add_option("--building", building)->required();
  shadow->add_option("--j", j)->required();
  shadow->add_option("--emit", emit)->default_val("counts");

  auto* far = app.add_subcommand("far", "truncated geometry far from a flag");
  far->add_option("--building", building)->required();
  far->add_option("--j", j)->required();
  far->add_option("--astar", astar, "index of the base flag among elements of the opposite type");
  far->add_option("--emit", emit)->default_val("counts");

  auto* unip = app.add_subcommand("unipotent", "unipotent radical and representation data");
  unip->add_option("--building", building)->required();
  unip->add_option("--j", j)->required();
  unip->add_option("--emit", emit)->default_val("");

  auto* ver = app.add_subcommand("veronese", "coordinatized Veronesean and wedge embeddings");
  ver->add_option("--kind", kind)->check(CLI::IsMember({"quadratic", "hermitian", "wedge"}));
  ver->add_option("--n", n);
  ver->add_option("--q", q);
  ver->add_option("--emit", emit)->default_val("dims");

  auto* hull = app.add_subcommand("hull", "coset enumeration of an amalgam file");
  hull->add_option("--amalgam", amalgam_file)->required();
  auto* hull_max = hull->add_option("--max-cosets", max_cosets);
  hull->add_option("--emit", emit)->default_val("");

  auto* list = app.add_subcommand("list", "catalog of registered experiments");
  list->add_flag("--json", as_json);

  auto* run = app.add_subcommand("run", "run registered experiments with regression checks");
  run->add_option("names", names, "experiment names");
  run->add_flag("--all", all);
  run->add_flag("--parallel", parallel);
  auto* run_emit = run->add_option("--emit", emit)->default_val("json");
  auto* run_max = run->add_option("--max-cosets", max_cosets);

  try {
    app.parse(argc, argv);
    g.load();
    g.fill(run_max, "max_cosets", max_cosets);
    g.fill(hull_max, "max_cosets", max_cosets);
    g.fill(run_emit, "emit", emit);

    if (*shadow) return cmd_shadow(building, j, emit);
    if (*far) return cmd_far(building, j, astar, emit);
    if (*unip) return cmd_unipotent(building, j, emit);
    if (*ver) return cmd_veronese(kind, n, q, emit);
    if (*hull) return cmd_hull(amalgam_file, max_cosets, emit);
    if (*list) return cmd_list(as_json);
    if (*run) return cmd_run(names, all, parallel, emit, max_cosets);
    return kUsage;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const bge::resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kOverflow;
  } catch (const bge::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
