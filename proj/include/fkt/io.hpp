#pragma once

#include <string>

#include "json.hpp"

#include "fkt/classify.hpp"

namespace fkt {

/// Raised when a graph file cannot be read (exit code 66 at the CLI).
class FileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GraphFile {
  std::string name;
  Graph graph;
};

/// Parse {"vertices": n, "adjacency": [[...]], "name": optional}; throws
/// std::invalid_argument on malformed input.
GraphFile parse_graph_json(const std::string& text);
GraphFile load_graph_file(const std::string& path);

std::string fk_report_text(const Graph& g, const std::string& name);
nlohmann::ordered_json fk_report_json(const Graph& g, const std::string& name);

/// Hasse diagram of the ideal lattice; AF covering subquotients drawn solid,
/// purely infinite ones dashed with a "~" label.
std::string lattice_dot(const Graph& g, const std::string& name);

std::string classify_report_text(const ClassifyReport& r, const std::string& name_a,
                                 const std::string& name_b);
nlohmann::ordered_json classify_report_json(const ClassifyReport& r,
                                            const std::string& name_a,
                                            const std::string& name_b);

std::string sweep_report_text(const SweepResult& s);
nlohmann::ordered_json sweep_report_json(const SweepResult& s);

} // namespace fkt
