#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fkt/io.hpp"

namespace py = pybind11;
using namespace fkt;

namespace {

Int int_from_py(const py::handle& h) {
  return Int(py::str(h).cast<std::string>());
}

py::object int_to_py(const Int& v) {
  static py::object py_int = py::module_::import("builtins").attr("int");
  return py_int(v.str());
}

IntMatrix matrix_from_py(const py::sequence& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? py::cast<py::sequence>(rows[0]).size() : 0;
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    py::sequence row = py::cast<py::sequence>(rows[i]);
    if (row.size() != c) throw std::invalid_argument("ragged matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = int_from_py(row[j]);
  }
  return m;
}

py::list matrix_to_py(const IntMatrix& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(int_to_py(m(i, j)));
    rows.append(std::move(row));
  }
  return rows;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  using nlohmann::ordered_json;
  switch (j.type()) {
    case ordered_json::value_t::object: {
      py::dict d;
      for (const auto& [k, v] : j.items()) d[py::str(k)] = json_to_py(v);
      return d;
    }
    case ordered_json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(json_to_py(v));
      return l;
    }
    case ordered_json::value_t::string: return py::str(j.get<std::string>());
    case ordered_json::value_t::boolean: return py::bool_(j.get<bool>());
    case ordered_json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case ordered_json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case ordered_json::value_t::number_float:
      return py::float_(j.get<double>());
    default: return py::none();
  }
}

Graph graph_from_py(const py::sequence& adjacency) {
  return Graph(matrix_from_py(adjacency));
}

py::list adjacency_to_py(const Graph& g) { return matrix_to_py(g.adjacency()); }

SweepTemplate template_from_string(const std::string& name) {
  if (name == "intro") return SweepTemplate::intro;
  if (name == "caseI") return SweepTemplate::case_i;
  if (name == "caseII") return SweepTemplate::case_ii;
  throw std::invalid_argument("unknown template " + name);
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "filtered, ordered K-theory of graph C*-algebras: exact integer "
            "linear algebra, ideal lattices, K-theory diagrams, and stable "
            "isomorphism decisions";

  m.def(
      "smith_normal_form",
      [](const py::sequence& rows) {
        SmithForm f = smith_normal_form(matrix_from_py(rows));
        py::dict out;
        out["U"] = matrix_to_py(f.u);
        out["D"] = matrix_to_py(f.d);
        out["V"] = matrix_to_py(f.v);
        out["rank"] = f.rank;
        return out;
      },
      py::arg("matrix"),
      "Smith normal form: U, D, V with U*A*V = D, U and V unimodular, and "
      "non-negative diagonal with divisibility chain.");

  m.def(
      "kernel_basis",
      [](const py::sequence& rows) { return matrix_to_py(kernel_basis(matrix_from_py(rows))); },
      py::arg("matrix"), "Columns form a basis of the integer kernel lattice.");

  m.def(
      "solve",
      [](const py::sequence& rows, const py::sequence& rhs) -> py::object {
        std::vector<Int> b;
        for (const auto& h : rhs) b.push_back(int_from_py(h));
        auto x = solve(matrix_from_py(rows), b);
        if (!x) return py::none();
        py::list out;
        for (const Int& v : *x) out.append(int_to_py(v));
        return out;
      },
      py::arg("matrix"), py::arg("rhs"),
      "Integer solution of A x = b, or None when none exists.");

  m.def(
      "cokernel_invariants",
      [](const py::sequence& rows) {
        FgAbGroup g(matrix_from_py(rows));
        py::dict out;
        out["free_rank"] = g.free_rank();
        py::list tors;
        for (const Int& d : g.invariant_factors()) tors.append(int_to_py(d));
        out["torsion"] = std::move(tors);
        out["display"] = group_to_string(g);
        return out;
      },
      py::arg("presentation"),
      "Free rank and invariant factors of Z^rows / colspan(presentation).");

  m.def(
      "condition_k",
      [](const py::sequence& adjacency) { return condition_K(graph_from_py(adjacency)); },
      py::arg("adjacency"));

  m.def(
      "hereditary_saturated_subsets",
      [](const py::sequence& adjacency) {
        IdealLattice lat = hereditary_saturated_subsets(graph_from_py(adjacency));
        py::dict out;
        py::list subsets;
        for (const auto& s : lat.subsets) {
          py::list t;
          for (std::size_t v : s) t.append(v);
          subsets.append(std::move(t));
        }
        out["subsets"] = std::move(subsets);
        out["linear"] = lat.is_linear;
        out["length"] = lat.length();
        return out;
      },
      py::arg("adjacency"), "All hereditary saturated vertex sets (0-based).");

  m.def(
      "class_membership",
      [](const py::sequence& adjacency) {
        CnMembership r = class_Cn_membership(graph_from_py(adjacency));
        py::dict out;
        out["member"] = r.member;
        if (r.member) {
          out["n"] = r.n;
          out["split"] = r.split;
          out["orientation"] = r.orientation == SplitOrientation::af_ideal
                                   ? "af_ideal"
                                   : "af_quotient";
        } else {
          out["reason"] = r.reason;
        }
        out["least_ideal_extension_eligible"] = r.least_ideal_extension_eligible;
        return out;
      },
      py::arg("adjacency"));

  m.def(
      "filtered_k_theory",
      [](const py::sequence& adjacency, const std::string& name) {
        return json_to_py(fk_report_json(graph_from_py(adjacency), name));
      },
      py::arg("adjacency"), py::arg("name") = "",
      "Per-interval K-groups, cones, and canonical maps; falls back to "
      "per-ideal data when the lattice is not linear.");

  m.def(
      "classify",
      [](const py::sequence& a, const py::sequence& b, long long bound) {
        SearchOptions opts;
        if (bound > 0) opts.bound = bound;
        ClassifyReport r = classify_pair(graph_from_py(a), graph_from_py(b), opts);
        return json_to_py(classify_report_json(r, "first", "second"));
      },
      py::arg("adjacency_a"), py::arg("adjacency_b"), py::arg("bound") = 0,
      "Stable isomorphism decision; exit_code 0 iso, 1 not iso, 2 unknown, 3 "
      "not applicable.");

  m.def(
      "criterion_case1",
      [](long long p, std::array<long long, 3> a, std::array<long long, 3> b) {
        return criterion_case1(p, a, b);
      },
      py::arg("p"), py::arg("xyz"), py::arg("xyz2"));
  m.def(
      "criterion_case2",
      [](long long p, std::array<long long, 3> a, std::array<long long, 3> b) {
        return criterion_case2(p, a, b);
      },
      py::arg("p"), py::arg("xyz"), py::arg("xyz2"));

  m.def(
      "sweep",
      [](const std::string& templ, long long p, long long lo, long long hi,
         bool verify) {
        return json_to_py(
            sweep_report_json(sweep(template_from_string(templ), p, lo, hi, verify)));
      },
      py::arg("template"), py::arg("p"), py::arg("lo"), py::arg("hi"),
      py::arg("verify") = false);

  m.def("intro_adjacency",
        [](long long n) { return adjacency_to_py(intro_graph(n)); }, py::arg("n"));
  m.def(
      "case1_adjacency",
      [](long long p, long long x, long long y, long long z) {
        return adjacency_to_py(case1_graph(p, x, y, z));
      },
      py::arg("p"), py::arg("x"), py::arg("y"), py::arg("z"));
  m.def(
      "case2_adjacency",
      [](long long p, long long x, long long y, long long z) {
        return adjacency_to_py(case2_graph(p, x, y, z));
      },
      py::arg("p"), py::arg("x"), py::arg("y"), py::arg("z"));

  m.attr("__version__") = "0.1.0";
}
