// Command-line front end: completion, DT queries, HDTV queries, pullback,
// verification harnesses, the local-P² sheaf route, and SVG export.
//
// Exit codes: 0 success, 1 validation/domain failure, 2 assertion failure in
// verify commands.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "scatterdt/io.hpp"

using namespace scatterdt;

namespace {

IVec parse_int_list(const std::string& s) {
  IVec out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (cur.empty()) throw DomainError("malformed integer list '" + s + "'");
      out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

QVec parse_rat_list(const std::string& s) {
  QVec out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (cur.empty()) throw DomainError("malformed rational list '" + s + "'");
      Rat r;
      if (r.set_str(cur, 10) != 0) throw DomainError("malformed rational '" + cur + "'");
      r.canonicalize();
      out.push_back(r);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

struct SideInput {
  std::string quiver_file, seed_file, preset_name;

  bool has_quiver() const { return !quiver_file.empty(); }
  bool has_seed() const { return !seed_file.empty(); }
  bool has_preset() const { return !preset_name.empty(); }

  Quiver quiver() const {
    if (has_preset()) return preset_by_name(preset_name).quiver;
    if (!has_quiver()) throw DomainError("no quiver input: pass --quiver FILE or --preset NAME");
    return quiver_from_json(parse_json_file(quiver_file));
  }
  SymplecticSeed seed() const {
    if (has_preset()) return preset_by_name(preset_name).seed;
    if (!has_seed()) throw DomainError("no seed input: pass --seed FILE or --preset NAME");
    json j = parse_json_file(seed_file);
    return seed_from_json(j.contains("seed") ? j.at("seed") : j);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scatterdt: exact scattering diagrams, quiver DT invariants and their "
               "punctured-GW counterparts"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  int order = 6;
  unsigned long long sample_seed = 1;
  std::string out_path;
  app.add_option("--order", order, "truncation order (>= 1)")->capture_default_str();
  app.add_option("--sample-seed", sample_seed, "seed for certified generic-point selection")
      ->capture_default_str();
  app.add_option("--out", out_path, "write output to a file instead of stdout");

  // complete
  auto* cmd_complete = app.add_subcommand("complete", "complete a diagram and dump it");
  SideInput in_complete;
  cmd_complete->add_option("--quiver", in_complete.quiver_file, "quiver JSON file");
  cmd_complete->add_option("--seed", in_complete.seed_file, "seed JSON file");
  cmd_complete->add_option("--preset", in_complete.preset_name, "preset name");
  bool complete_seed_side = false;
  cmd_complete->add_flag("--seed-side", complete_seed_side,
                         "complete the HDTV diagram of the preset's seed");

  // dt
  auto* cmd_dt = app.add_subcommand("dt", "DT invariants of a quiver dimension vector");
  SideInput in_dt;
  std::string gamma_str, theta_str;
  cmd_dt->add_option("--quiver", in_dt.quiver_file, "quiver JSON file");
  cmd_dt->add_option("--preset", in_dt.preset_name, "preset name");
  cmd_dt->add_option("--gamma", gamma_str, "dimension vector, e.g. 1,1")->required();
  cmd_dt->add_option("--theta", theta_str, "stability parameter in γ^⊥, e.g. 1,-1")->required();

  // hdtv
  auto* cmd_hdtv = app.add_subcommand("hdtv", "seed-side diagram, f_in/f_out, curve classes");
  SideInput in_hdtv;
  std::string point_str, A_str;
  cmd_hdtv->add_option("--seed", in_hdtv.seed_file, "seed JSON file");
  cmd_hdtv->add_option("--preset", in_hdtv.preset_name, "preset name");
  cmd_hdtv->add_option("--point", point_str, "sample point in M_R, e.g. 1,-1");
  cmd_hdtv->add_option("--A", A_str, "multiplicity vector over I, e.g. 1,1");

  // pullback
  auto* cmd_pb = app.add_subcommand(
      "pullback", "pull the completed, central-stripped cluster diagram back along ψ");
  std::string pb_preset, pb_file;
  cmd_pb->add_option("--preset", pb_preset, "preset name");
  cmd_pb->add_option("--bundle", pb_file, "JSON file with quiver+seed+psi");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "verification harnesses");
  auto* cmd_vc = cmd_verify->add_subcommand("comparison", "pullback vs direct HDTV completion");
  std::string vc_preset;
  cmd_vc->add_option("--preset", vc_preset, "preset name")->required();
  auto* cmd_vm = cmd_verify->add_subcommand("main", "quiver route vs gw_combination per chamber");
  std::string vm_preset, vm_gammas_file;
  int vm_bound = 0;
  cmd_vm->add_option("--preset", vm_preset, "preset name")->required();
  cmd_vm->add_option("--gammas", vm_gammas_file, "JSON array of dimension vectors");
  cmd_vm->add_option("--degree-bound", vm_bound,
                     "enumerate all admissible γ of total degree <= bound");

  // localp2
  auto* cmd_lp2 = app.add_subcommand("localp2", "sheaf-counting DT route on local P²");
  std::string chern_str;
  cmd_lp2->add_option("--chern", chern_str, "Chern data r,d,chi")->required();

  // export
  auto* cmd_export = app.add_subcommand("export", "render a completed rank-2 diagram");
  SideInput in_export;
  bool export_svg = true;
  bool export_seed_side = false;
  cmd_export->add_option("--quiver", in_export.quiver_file, "quiver JSON file");
  cmd_export->add_option("--seed", in_export.seed_file, "seed JSON file");
  cmd_export->add_option("--preset", in_export.preset_name, "preset name");
  cmd_export->add_flag("--svg", export_svg, "emit SVG (default)");
  cmd_export->add_flag("--seed-side", export_seed_side, "render the seed-side diagram");

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "validate seed/compatibility inputs");
  std::string val_preset, val_bundle;
  cmd_validate->add_option("--preset", val_preset, "preset name");
  cmd_validate->add_option("--bundle", val_bundle, "JSON file with quiver+seed+psi");

  for (auto* sc : app.get_subcommands({})) {
    sc->fallthrough();
    for (auto* nested : sc->get_subcommands({})) nested->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (order < 1) throw DomainError("order must be >= 1");

    if (cmd_complete->parsed()) {
      ScatteringDiagram d =
          (in_complete.has_seed() || (in_complete.has_preset() && complete_seed_side))
              ? complete(initial_hdtv_diagram(in_complete.seed(), order), order)
              : complete(initial_cluster_diagram(in_complete.quiver(), order), order);
      json j = diagram_to_json(canonical_form(d));
      j["sample_seed"] = sample_seed;
      emit(j, out_path);
      return 0;
    }

    if (cmd_dt->parsed()) {
      Quiver q = in_dt.quiver();
      DimensionVector gamma(parse_int_list(gamma_str));
      Covector theta(parse_rat_list(theta_str));
      DTRecord rec = dt_invariants(q, gamma, theta, order);
      emit(dt_record_to_json(rec), out_path);
      return 0;
    }

    if (cmd_hdtv->parsed()) {
      SymplecticSeed s = in_hdtv.seed();
      HdtvEngine engine(s);
      auto diag = engine.completed(order);
      json j;
      j["diagram"] = diagram_to_json(canonical_form(truncate_diagram(*diag, order)));
      if (!point_str.empty()) {
        QVec x = parse_rat_list(point_str);
        auto [fin, fout] = split_in_out(truncate_diagram(*diag, order), x);
        j["point"] = point_str;
        j["f_in"] = series_to_json(fin);
        j["f_out"] = series_to_json(fout);
        if (!A_str.empty()) {
          IVec A = parse_int_list(A_str);
          j["curve_class"] = curve_class_to_json(s, curve_class(s, A, x));
          // The aggregate Σ_τ k_τ N_{τ,β}; labeled to prevent misreading as a
          // single invariant.
          j["sum_ktau_N"] = engine.gw_combination(A, x, order).get_str();
        }
      }
      emit(j, out_path);
      return 0;
    }

    if (cmd_pb->parsed()) {
      Preset p = pb_preset.empty() ? preset_from_json(parse_json_file(pb_file))
                                   : preset_by_name(pb_preset);
      ScatteringDiagram dq = complete(initial_cluster_diagram(p.quiver, order), order);
      ScatteringDiagram dp = pullback(remove_central_walls(dq), p.psi, p.seed);
      emit(diagram_to_json(canonical_form(dp)), out_path);
      return 0;
    }

    if (cmd_vc->parsed()) {
      VerifyReport rep = verify_comparison(preset_by_name(vc_preset), order);
      emit(verify_report_to_json(rep), out_path);
      return rep.pass() ? 0 : 2;
    }

    if (cmd_vm->parsed()) {
      Preset p = preset_by_name(vm_preset);
      std::vector<DimensionVector> gammas;
      if (!vm_gammas_file.empty()) {
        for (const auto& g : parse_json_file(vm_gammas_file)) {
          IVec v;
          for (const auto& x : g) v.push_back(x.get<Int>());
          gammas.emplace_back(v);
        }
      } else if (vm_bound > 0) {
        gammas = main_gamma_candidates(p, vm_bound);
      } else {
        gammas = main_gamma_candidates(p, order);
      }
      VerifyReport rep = verify_main(p, gammas, order);
      emit(verify_report_to_json(rep), out_path);
      return rep.pass() ? 0 : 2;
    }

    if (cmd_lp2->parsed()) {
      IVec v = parse_int_list(chern_str);
      if (v.size() != 3) throw DomainError("--chern expects r,d,chi");
      DTRecord rec = local_p2_sheaf_dt(v[0], v[1], v[2], order);
      emit(dt_record_to_json(rec), out_path);
      return 0;
    }

    if (cmd_export->parsed()) {
      ScatteringDiagram d =
          (in_export.has_seed() || (in_export.has_preset() && export_seed_side))
              ? complete(initial_hdtv_diagram(in_export.seed(), order), order)
              : complete(initial_cluster_diagram(in_export.quiver(), order), order);
      std::string svg = diagram_to_svg(canonical_form(d));
      if (out_path.empty())
        std::cout << svg;
      else
        write_file(out_path, svg);
      return 0;
    }

    if (cmd_validate->parsed()) {
      Preset p = val_preset.empty() ? preset_from_json(parse_json_file(val_bundle))
                                    : preset_by_name(val_preset);
      json j;
      j["seed"] = validation_to_json(validate_seed(p.seed));
      j["compatibility"] = validation_to_json(validate_compatibility(p.quiver, p.seed, p.psi));
      emit(j, out_path);
      bool ok = validate_seed(p.seed).ok() &&
                validate_compatibility(p.quiver, p.seed, p.psi).ok();
      return ok ? 0 : 1;
    }

    throw DomainError("no subcommand executed");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
