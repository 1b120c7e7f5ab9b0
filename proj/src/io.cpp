#include "scatterdt/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace scatterdt {

namespace {

IVec ivec_from_json(const json& j) {
  IVec v;
  for (const auto& x : j) v.push_back(x.get<Int>());
  return v;
}

json ivec_to_json(const IVec& v) {
  json j = json::array();
  for (Int x : v) j.push_back(x);
  return j;
}

std::vector<IVec> matrix_from_json(const json& j) {
  std::vector<IVec> m;
  for (const auto& row : j) m.push_back(ivec_from_json(row));
  return m;
}

json matrix_to_json(const std::vector<IVec>& m) {
  json j = json::array();
  for (const auto& row : m) j.push_back(ivec_to_json(row));
  return j;
}

Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw DomainError("malformed rational '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace

Quiver quiver_from_json(const json& j) {
  Quiver q;
  if (!j.contains("vertices")) throw DomainError("quiver file: missing field 'vertices'");
  q.vertex_count = j.at("vertices").get<int>();
  q.arrow_counts.assign(q.vertex_count, IVec(q.vertex_count, 0));
  if (!j.contains("arrows")) throw DomainError("quiver file: missing field 'arrows'");
  for (const auto& a : j.at("arrows")) {
    if (!a.is_array() || a.size() != 3)
      throw DomainError("quiver file: arrows must be (from,to,count) triples");
    int from = a[0].get<int>(), to = a[1].get<int>();
    Int count = a[2].get<Int>();
    if (from < 1 || from > q.vertex_count || to < 1 || to > q.vertex_count)
      throw DomainError("quiver file: arrow endpoint out of range (vertices are 1-based)");
    q.arrow_counts[from - 1][to - 1] += count;
  }
  q.trivial_attractor = j.value("trivial_attractor", false);
  q.attractor_note = j.value("attractor_note", std::string{});
  q.validate();
  return q;
}

json quiver_to_json(const Quiver& q) {
  json j;
  j["vertices"] = q.vertex_count;
  json arrows = json::array();
  for (int i = 0; i < q.vertex_count; ++i)
    for (int k = 0; k < q.vertex_count; ++k)
      if (q.arrow_counts[i][k] != 0)
        arrows.push_back(json::array({i + 1, k + 1, q.arrow_counts[i][k]}));
  j["arrows"] = arrows;
  j["trivial_attractor"] = q.trivial_attractor;
  if (!q.attractor_note.empty()) j["attractor_note"] = q.attractor_note;
  return j;
}

SymplecticSeed seed_from_json(const json& j) {
  SymplecticSeed s;
  s.rank = j.at("rank").get<int>();
  s.e_vectors = matrix_from_json(j.at("e_vectors"));
  s.omega = matrix_from_json(j.at("omega"));
  s.fan_rays = matrix_from_json(j.at("fan_rays"));
  return s;
}

json seed_to_json(const SymplecticSeed& s) {
  json j;
  j["rank"] = s.rank;
  j["e_vectors"] = matrix_to_json(s.e_vectors);
  j["omega"] = matrix_to_json(s.omega);
  j["fan_rays"] = matrix_to_json(s.fan_rays);
  return j;
}

CompatibilityMap psi_from_json(const json& j) {
  CompatibilityMap p;
  p.matrix = matrix_from_json(j.at("matrix"));
  return p;
}

json psi_to_json(const CompatibilityMap& p) {
  json j;
  j["matrix"] = matrix_to_json(p.matrix);
  return j;
}

Preset preset_from_json(const json& j) {
  if (j.is_string()) return preset_by_name(j.get<std::string>());
  Preset p;
  p.name = j.value("name", std::string{"custom"});
  p.quiver = quiver_from_json(j.at("quiver"));
  p.seed = seed_from_json(j.at("seed"));
  p.psi = psi_from_json(j.at("psi"));
  return p;
}

json preset_to_json(const Preset& p) {
  json j;
  j["name"] = p.name;
  j["quiver"] = quiver_to_json(p.quiver);
  j["seed"] = seed_to_json(p.seed);
  j["psi"] = psi_to_json(p.psi);
  return j;
}

json series_to_json(const TruncatedSeries& s) {
  // Terms already iterate in lexicographic exponent order (std::map).
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) {
    json t = json::array();
    t.push_back(ivec_to_json(e.lat));
    t.push_back(ivec_to_json(e.t));
    t.push_back(c.get_num().get_str());
    t.push_back(c.get_den().get_str());
    terms.push_back(t);
  }
  return terms;
}

namespace {

json support_to_json(const Support& s) {
  json j;
  switch (s.kind) {
    case Support::Kind::ray2:
      j["kind"] = "ray";
      j["generator"] = ivec_to_json(s.a);
      break;
    case Support::Kind::line2:
      j["kind"] = "line";
      j["generator"] = ivec_to_json(s.a);
      break;
    case Support::Kind::hyperplane:
      j["kind"] = "hyperplane";
      break;
    case Support::Kind::halfplane3:
      j["kind"] = "halfplane";
      j["line_generator"] = ivec_to_json(s.a);
      j["ray_generator"] = ivec_to_json(s.b);
      break;
  }
  return j;
}

}  // namespace

json diagram_to_json(const ScatteringDiagram& d) {
  json j;
  json ctx;
  ctx["side"] = d.ctx.side == DiagramContext::Side::quiver ? "quiver" : "seed";
  ctx["ambient_dim"] = d.ctx.ambient_dim();
  if (d.ctx.side == DiagramContext::Side::quiver)
    ctx["quiver"] = quiver_to_json(d.ctx.quiver);
  else
    ctx["seed"] = seed_to_json(d.ctx.seed);
  j["context"] = ctx;
  j["order"] = d.order;
  json walls = json::array();
  for (const Wall& w : d.walls) {
    json wj;
    wj["support"] = support_to_json(w.support);
    wj["direction"] = ivec_to_json(w.direction);
    wj["tag"] = tag_name(w.tag);
    wj["function"] = series_to_json(w.function);
    walls.push_back(wj);
  }
  j["walls"] = walls;
  return j;
}

json dt_record_to_json(const DTRecord& r) {
  json j;
  j["gamma"] = ivec_to_json(r.gamma.coords);
  json th = json::array();
  for (const Rat& t : r.theta.coords) th.push_back(t.get_str());
  j["theta"] = th;
  j["omega_bar"] = r.omega_bar.get_str();
  j["omega"] = r.omega;
  j["chamber"] = r.chamber_note;
  json mult = json::array();
  for (const DTMultiple& m : r.multiples) {
    json mj;
    mj["k"] = m.k;
    mj["omega_bar"] = m.omega_bar.get_str();
    mj["omega"] = m.omega;
    mult.push_back(mj);
  }
  j["multiples"] = mult;
  return j;
}

json validation_to_json(const ValidationReport& r) {
  json j;
  j["valid"] = r.ok();
  j["issues"] = r.issues;
  if (r.cokernel_order) j["cokernel_order"] = *r.cokernel_order;
  return j;
}

json verify_report_to_json(const VerifyReport& r) {
  json j;
  j["pass"] = r.pass();
  json checks = json::array();
  for (const auto& c : r.checks) {
    json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

json curve_class_to_json(const SymplecticSeed& s, const CurveClassRecord& r) {
  json j;
  json inter = json::array();
  for (size_t k = 0; k < s.fan_rays.size(); ++k) {
    json e;
    e["ray"] = ivec_to_json(s.fan_rays[k]);
    e["pairing"] = r.intersection_numbers[k];
    inter.push_back(e);
  }
  j["intersection_numbers"] = inter;
  j["exceptional_multiplicities"] = ivec_to_json(r.exceptional_multiplicities);
  return j;
}

json consistency_to_json(const ConsistencyReport& r) {
  json j;
  j["consistent"] = r.consistent;
  if (!r.consistent) {
    j["defect_degree"] = r.defect_degree;
    j["defect_direction"] = ivec_to_json(r.defect_direction);
    if (r.joint) j["joint"] = ivec_to_json(*r.joint);
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write file '" + path + "'");
  out << content;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DomainError("parse error in '" + path + "': " + e.what());
  }
}

std::string diagram_to_svg(const ScatteringDiagram& d, int degree_cutoff) {
  if (d.ctx.ambient_dim() != 2)
    throw DomainError("SVG export renders rank-2 diagrams only");
  const double R = 220.0, C = 256.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" "
         "viewBox=\"0 0 512 512\">\n";
  svg << "  <rect width=\"512\" height=\"512\" fill=\"white\"/>\n";
  auto emit_ray = [&](const IVec& dir, const std::string& color, const std::string& label) {
    double nx = static_cast<double>(dir[0]), ny = static_cast<double>(dir[1]);
    double len = std::sqrt(nx * nx + ny * ny);
    nx /= len;
    ny /= len;
    double x2 = C + R * nx, y2 = C - R * ny;  // svg y grows downward
    svg << "  <line x1=\"" << C << "\" y1=\"" << C << "\" x2=\"" << x2 << "\" y2=\"" << y2
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    double lx = C + (R + 16) * nx, ly = C - (R + 16) * ny;
    svg << "  <text x=\"" << lx << "\" y=\"" << ly
        << "\" font-size=\"10\" text-anchor=\"middle\">" << label << "</text>\n";
  };
  for (const Wall& w : d.walls) {
    std::string label;
    int shown = 0;
    for (const auto& [e, c] : w.function.terms()) {
      if (is_zero(e.lat) && is_zero(e.t)) continue;
      if (w.function.degree_of(e) > degree_cutoff) continue;
      if (shown++) label += " + ";
      if (shown > 3) {
        label += "...";
        break;
      }
      label += c.get_str() + "z" + ivec_str(e.lat);
      if (!e.t.empty() && !is_zero(e.t)) label += "t" + ivec_str(e.t);
    }
    if (!label.empty()) label = "1 + " + label;
    std::string color = w.tag == WallTag::initial ? "#1f77b4" : "#d62728";
    emit_ray(w.support.a, color, label);
    if (w.support.kind == Support::Kind::line2) emit_ray(negate(w.support.a), color, "");
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace scatterdt
