#include "fkt/io.hpp"

#include <fstream>
#include <sstream>

namespace fkt {

using nlohmann::ordered_json;

namespace {

ordered_json json_int(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

ordered_json json_matrix(const IntMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json_int(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json json_group(const FgAbGroup& g) {
  ordered_json out;
  out["free_rank"] = g.free_rank();
  ordered_json tors = ordered_json::array();
  for (const Int& d : g.invariant_factors()) tors.push_back(json_int(d));
  out["torsion"] = std::move(tors);
  out["display"] = group_to_string(g);
  return out;
}

ordered_json json_vertexset(const VertexSet& s) {
  ordered_json out = ordered_json::array();
  for (std::size_t v : s) out.push_back(v + 1); // 1-based in reports
  return out;
}

std::string vertexset_str(const VertexSet& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i] + 1;
  }
  os << "}";
  return os.str();
}

std::string cone_str(const KData& kd) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < kd.vertices.size(); ++i) {
    if (i) os << ", ";
    os << "[v" << kd.vertices[i] + 1 << "]";
  }
  os << ">";
  return os.str();
}

} // namespace

GraphFile parse_graph_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j.contains("adjacency"))
    throw std::invalid_argument("graph file needs \"vertices\" and \"adjacency\"");
  if (!j["vertices"].is_number_integer() || j["vertices"].get<long long>() < 1)
    throw std::invalid_argument("\"vertices\" must be a positive integer");
  const std::size_t n = j["vertices"].get<std::size_t>();
  const auto& adj = j["adjacency"];
  if (!adj.is_array() || adj.size() != n)
    throw std::invalid_argument("\"adjacency\" must be a " + std::to_string(n) +
                                " x " + std::to_string(n) + " integer matrix");
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!adj[i].is_array() || adj[i].size() != n)
      throw std::invalid_argument("adjacency row " + std::to_string(i + 1) +
                                  " has the wrong length");
    for (std::size_t k = 0; k < n; ++k) {
      if (!adj[i][k].is_number_integer() || adj[i][k].get<long long>() < 0)
        throw std::invalid_argument("adjacency entries must be integers >= 0");
      m(i, k) = adj[i][k].get<long long>();
    }
  }
  GraphFile out;
  out.name = j.value("name", std::string{});
  out.graph = Graph(std::move(m));
  return out;
}

GraphFile load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  GraphFile gf = parse_graph_json(buf.str());
  if (gf.name.empty()) gf.name = path;
  return gf;
}

namespace {

void append_interval_line(std::ostringstream& os, const Interval& iv, const KData& kd) {
  os << "  [" << iv.a << "," << iv.b << "]  vertices " << vertexset_str(kd.vertices)
     << "\n    K0 = " << group_to_string(kd.k0);
  if (kd.b.cols() == 0)
    os << "  (free on the vertex classes)";
  else
    os << "  (cok of " << kd.b.to_string() << ")";
  os << "\n    K1 = " << group_to_string(kd.k1) << "\n    cone generators "
     << cone_str(kd) << "\n";
}

} // namespace

std::string fk_report_text(const Graph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph: " << (name.empty() ? "(unnamed)" : name) << " (" << g.vertices()
     << " vertices)\n";
  os << "Condition (K): " << (condition_K(g) ? "holds" : "fails") << "\n";
  IdealLattice lat = hereditary_saturated_subsets(g);
  if (!lat.is_linear) {
    os << "ideal lattice: " << lat.subsets.size()
       << " gauge-invariant ideals, not linear\n";
    os << "notice: the lattice is not a chain; listing K-theory per ideal "
          "instead of the interval diagram\n";
    for (const auto& s : lat.subsets) {
      if (s.empty()) continue;
      KData kd = make_kdata(g, s);
      os << "  ideal " << vertexset_str(s) << ": K0 = " << group_to_string(kd.k0)
         << ", K1 = " << group_to_string(kd.k1) << "\n";
    }
    return os.str();
  }
  FkDiagram d = filtered_k_theory(g);
  os << "ideal lattice: linear chain of length " << d.n() << "\n  ";
  for (std::size_t i = 0; i < lat.subsets.size(); ++i) {
    if (i) os << " < ";
    os << vertexset_str(lat.subsets[i]);
  }
  os << "\n";
  CnMembership m = class_Cn_membership(g);
  if (m.member)
    os << "class: member of C_" << m.n << " (split after chain step " << m.split
       << ", "
       << (m.orientation == SplitOrientation::af_ideal ? "AF ideal side"
                                                       : "AF quotient side")
       << ")\n";
  else
    os << "class: not a member (" << m.reason << ")\n";
  os << "intervals (A[a,b] = subquotient on H_{n-a+1} \\ H_{n-b}):\n";
  for (const auto& [iv, kd] : d.groups()) append_interval_line(os, iv, kd);
  os << "six-term maps per triple u<v<w (lifts on generators):\n";
  for (const auto& [t, st] : d.maps()) {
    os << "  (" << t.u << "," << t.v << "," << t.w << "): iota0 "
       << st.iota0.lift.to_string() << ", pi0 " << st.pi0.lift.to_string()
       << ", delta " << st.delta.lift.to_string() << "\n";
  }
  return os.str();
}

ordered_json fk_report_json(const Graph& g, const std::string& name) {
  ordered_json out;
  out["name"] = name;
  out["vertices"] = g.vertices();
  out["adjacency"] = json_matrix(g.adjacency());
  out["condition_K"] = condition_K(g);
  IdealLattice lat = hereditary_saturated_subsets(g);
  ordered_json jl;
  jl["linear"] = lat.is_linear;
  jl["length"] = lat.length();
  ordered_json subs = ordered_json::array();
  for (const auto& s : lat.subsets) subs.push_back(json_vertexset(s));
  jl["subsets"] = std::move(subs);
  out["lattice"] = std::move(jl);
  if (!lat.is_linear) {
    out["notice"] = "lattice is not linear; K-theory listed per ideal";
    ordered_json ideals = ordered_json::array();
    for (const auto& s : lat.subsets) {
      if (s.empty()) continue;
      KData kd = make_kdata(g, s);
      ordered_json ji;
      ji["subset"] = json_vertexset(s);
      ji["k0"] = json_group(kd.k0);
      ji["k1"] = json_group(kd.k1);
      ideals.push_back(std::move(ji));
    }
    out["ideals"] = std::move(ideals);
    return out;
  }
  FkDiagram d = filtered_k_theory(g);
  CnMembership m = class_Cn_membership(g);
  ordered_json jm;
  jm["member"] = m.member;
  if (m.member) {
    jm["n"] = m.n;
    jm["split"] = m.split;
    jm["orientation"] =
        m.orientation == SplitOrientation::af_ideal ? "af_ideal" : "af_quotient";
  } else {
    jm["reason"] = m.reason;
  }
  out["class_membership"] = std::move(jm);
  ordered_json intervals = ordered_json::array();
  for (const auto& [iv, kd] : d.groups()) {
    ordered_json ji;
    ji["a"] = iv.a;
    ji["b"] = iv.b;
    ji["vertices"] = json_vertexset(kd.vertices);
    ji["presentation"] = json_matrix(kd.b);
    ji["k0"] = json_group(kd.k0);
    ji["k1"] = json_group(kd.k1);
    ordered_json cone = ordered_json::array();
    for (const auto& c : kd.cone.generators) {
      ordered_json v = ordered_json::array();
      for (const Int& e : c) v.push_back(json_int(e));
      cone.push_back(std::move(v));
    }
    ji["cone"] = std::move(cone);
    intervals.push_back(std::move(ji));
  }
  out["intervals"] = std::move(intervals);
  ordered_json triples = ordered_json::array();
  for (const auto& [t, st] : d.maps()) {
    ordered_json jt;
    jt["u"] = t.u;
    jt["v"] = t.v;
    jt["w"] = t.w;
    jt["iota0"] = json_matrix(st.iota0.lift);
    jt["pi0"] = json_matrix(st.pi0.lift);
    jt["delta"] = json_matrix(st.delta.lift);
    jt["iota1"] = json_matrix(st.iota1.lift);
    jt["pi1"] = json_matrix(st.pi1.lift);
    triples.push_back(std::move(jt));
  }
  out["triples"] = std::move(triples);
  return out;
}

std::string lattice_dot(const Graph& g, const std::string& name) {
  IdealLattice lat = hereditary_saturated_subsets(g);
  std::ostringstream os;
  os << "digraph ideal_lattice {\n";
  os << "  label=\"" << (name.empty() ? "ideal lattice" : name) << "\";\n";
  os << "  rankdir=BT;\n";
  for (std::size_t i = 0; i < lat.subsets.size(); ++i) {
    os << "  n" << i << " [label=\""
       << (lat.subsets[i].empty() ? std::string("0") : vertexset_str(lat.subsets[i]))
       << "\", shape=" << (lat.subsets[i].empty() ? "circle" : "ellipse") << "];\n";
  }
  for (auto [lo, hi] : lat.covers) {
    Graph simple = subquotient_graph(g, lat.subsets[hi], lat.subsets[lo]);
    bool infinite = simple.has_cycle();
    os << "  n" << lo << " -> n" << hi;
    if (infinite) os << " [style=dashed, label=\"~\"]";
    else os << " [style=solid]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

const char* status_str(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::isomorphic: return "isomorphic";
    case Verdict::Status::not_isomorphic: return "not_isomorphic";
    case Verdict::Status::unknown: return "unknown";
  }
  return "?";
}

} // namespace

std::string classify_report_text(const ClassifyReport& r, const std::string& name_a,
                                 const std::string& name_b) {
  std::ostringstream os;
  os << "classify: " << name_a << " vs " << name_b << "\n";
  os << "status: " << status_str(r.verdict.status)
     << (r.applicable ? "" : " (classification theorem not applicable)") << "\n";
  os << "path: " << r.path << "\n";
  if (!r.notes.empty()) os << "notes: " << r.notes << "\n";
  if (r.verdict.status == Verdict::Status::not_isomorphic)
    os << "obstruction: " << r.verdict.obstruction << "\n";
  if (r.verdict.status == Verdict::Status::isomorphic && !r.verdict.witness.empty()) {
    os << "witness (lift matrices on generators):\n";
    for (const auto& [label, hom] : r.verdict.witness)
      os << "  " << label << ": " << hom.lift.to_string() << "\n";
  }
  os << "search complete: " << (r.verdict.search_complete ? "yes" : "no") << "\n";
  os << "exit code: " << r.exit_code << "\n";
  return os.str();
}

ordered_json classify_report_json(const ClassifyReport& r, const std::string& name_a,
                                  const std::string& name_b) {
  ordered_json out;
  out["first"] = name_a;
  out["second"] = name_b;
  out["status"] = status_str(r.verdict.status);
  out["applicable"] = r.applicable;
  out["path"] = r.path;
  out["notes"] = r.notes;
  out["search_complete"] = r.verdict.search_complete;
  out["obstruction"] = r.verdict.obstruction;
  ordered_json w;
  for (const auto& [label, hom] : r.verdict.witness) w[label] = json_matrix(hom.lift);
  out["witness"] = std::move(w);
  out["exit_code"] = r.exit_code;
  return out;
}

namespace {

std::string template_str(SweepTemplate t) {
  switch (t) {
    case SweepTemplate::intro: return "intro";
    case SweepTemplate::case_i: return "caseI";
    case SweepTemplate::case_ii: return "caseII";
  }
  return "?";
}

std::string tuple_str(SweepTemplate t, const std::array<long long, 3>& xyz) {
  std::ostringstream os;
  if (t == SweepTemplate::intro) os << "E_" << xyz[2];
  else os << "(" << xyz[0] << "," << xyz[1] << "," << xyz[2] << ")";
  return os.str();
}

} // namespace

std::string sweep_report_text(const SweepResult& s) {
  std::ostringstream os;
  os << "sweep: template " << template_str(s.templ) << ", p = " << s.p << ", "
     << s.tuples.size() << " graphs\n";
  os << "criterion: " << s.criterion
     << (s.verified ? " (cross-checked by the generic search)" : "") << "\n";
  os << "stable isomorphism classes: " << s.classes.size() << "\n";
  for (std::size_t c = 0; c < s.classes.size(); ++c) {
    os << "  class " << c + 1 << " (size " << s.classes[c].size()
       << "): representative " << tuple_str(s.templ, s.tuples[s.classes[c][0]])
       << ", members";
    for (std::size_t i : s.classes[c]) os << " " << tuple_str(s.templ, s.tuples[i]);
    os << "\n";
  }
  return os.str();
}

ordered_json sweep_report_json(const SweepResult& s) {
  ordered_json out;
  out["template"] = template_str(s.templ);
  out["p"] = s.p;
  out["count"] = s.tuples.size();
  out["criterion"] = s.criterion;
  out["verified"] = s.verified;
  ordered_json classes = ordered_json::array();
  for (const auto& cls : s.classes) {
    ordered_json jc;
    jc["size"] = cls.size();
    jc["representative"] = tuple_str(s.templ, s.tuples[cls[0]]);
    ordered_json members = ordered_json::array();
    for (std::size_t i : cls) {
      ordered_json t = ordered_json::array();
      for (long long v : s.tuples[i]) t.push_back(v);
      members.push_back(std::move(t));
    }
    jc["members"] = std::move(members);
    classes.push_back(std::move(jc));
  }
  out["classes"] = std::move(classes);
  return out;
}

} // namespace fkt
