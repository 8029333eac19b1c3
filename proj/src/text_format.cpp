#include "entrolab/text_format.hpp"

#include <map>
#include <sstream>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Rational fraction(const std::string& text, int line, const std::string& field) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(line, field + ": " + e.what());
  }
}

class Reader {
 public:
  explicit Reader(const std::vector<KeyValue>& entries) {
    for (const auto& kv : entries) {
      if (kv.key == "vertices") {
        for (auto& w : words(kv.value)) vertices_.push_back(w);
      } else if (kv.key == "edge") {
        read_edge(kv);
      }
    }
    if (edges_.empty()) throw SchemaError(0, "inline system needs at least one 'edge'");
    graph_.emplace_back(vertices_, edges_);
    const MetricGraph& g = graph_.front();
    std::map<std::string, std::size_t> index;
    for (const auto& kv : entries) {
      if (kv.key == "piece") {
        auto [name, path] = named_path(kv, "piece");
        if (!index.emplace(name, pieces_.size()).second) throw SchemaError(kv.line, "duplicate piece '" + name + "'");
        pieces_.push_back(Piece{name, std::move(path)});
      } else if (kv.key == "boundary") {
        for (auto& w : words(kv.value)) boundary_.push_back(point(g, w, kv.line));
      }
    }
    if (pieces_.empty()) throw SchemaError(0, "inline system needs at least one 'piece'");
    images_.resize(pieces_.size());
    std::vector<bool> seen(pieces_.size(), false);
    for (const auto& kv : entries) {
      if (kv.key != "image") continue;
      auto [name, path] = named_path(kv, "image");
      auto it = index.find(name);
      if (it == index.end()) throw SchemaError(kv.line, "image of unknown piece '" + name + "'");
      if (seen[it->second]) throw SchemaError(kv.line, "second image for piece '" + name + "'");
      seen[it->second] = true;
      images_[it->second] = std::move(path);
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (!seen[i]) throw SchemaError(0, "piece '" + pieces_[i].name + "' has no 'image'");
    }
  }

  PLMarkovMap build() {
    return PLMarkovMap(std::move(graph_.front()), Splitting{std::move(pieces_), std::move(boundary_)},
                       std::move(images_));
  }

 private:
  void read_edge(const KeyValue& kv) {
    const auto parts = split(kv.value, ':');
    if (parts.size() != 4 || parts[0].empty()) {
      throw SchemaError(kv.line, "edge: expected 'id : u : v : length', got '" + kv.value + "'");
    }
    auto vertex = [&](const std::string& name) {
      for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] == name) return i;
      }
      throw SchemaError(kv.line, "edge '" + parts[0] + "': unknown vertex '" + name + "'");
    };
    edges_.push_back(Edge{parts[0], vertex(parts[1]), vertex(parts[2]), fraction(parts[3], kv.line, "edge length")});
  }

  std::pair<std::string, Path> named_path(const KeyValue& kv, const std::string& field) {
    const auto colon = kv.value.find(':');
    if (colon == std::string::npos) throw SchemaError(kv.line, field + ": expected 'NAME : segments'");
    const std::string name = trim(std::string_view(kv.value).substr(0, colon));
    if (name.empty()) throw SchemaError(kv.line, field + ": empty name");
    Path path;
    for (auto& w : words(std::string_view(kv.value).substr(colon + 1))) path.push_back(segment(w, kv.line));
    if (path.empty()) throw SchemaError(kv.line, field + " '" + name + "' has no segments");
    return {name, std::move(path)};
  }

  std::size_t edge_index(const std::string& id, int line) const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].id == id) return e;
    }
    throw SchemaError(line, "unknown edge '" + id + "'");
  }

  Segment segment(const std::string& w, int line) const {
    if (!w.empty() && w[0] == '~') {
      const std::size_t e = edge_index(w.substr(1), line);
      return Segment{e, edges_[e].length, 0};
    }
    const auto open = w.find('[');
    if (open == std::string::npos) {
      const std::size_t e = edge_index(w, line);
      return Segment{e, 0, edges_[e].length};
    }
    const auto arrow = w.find("->", open);
    if (w.back() != ']' || arrow == std::string::npos) {
      throw SchemaError(line, "segment: expected 'id[from->to]', got '" + w + "'");
    }
    const std::size_t e = edge_index(w.substr(0, open), line);
    return Segment{e, fraction(w.substr(open + 1, arrow - open - 1), line, "segment offset"),
                   fraction(w.substr(arrow + 2, w.size() - arrow - 3), line, "segment offset")};
  }

  GraphPoint point(const MetricGraph& g, const std::string& w, int line) const {
    const auto at = w.find('@');
    if (at == std::string::npos) {
      if (auto v = g.find_vertex(w)) return GraphPoint::at_vertex(*v);
      throw SchemaError(line, "boundary: unknown vertex '" + w + "'");
    }
    const std::size_t e = edge_index(w.substr(0, at), line);
    try {
      return g.point(e, fraction(w.substr(at + 1), line, "boundary offset"));
    } catch (const DomainError& err) {
      throw InvariantError(std::string("boundary point: ") + err.what());
    }
  }

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<MetricGraph> graph_;  // at most one; MetricGraph has no empty state
  std::vector<Piece> pieces_;
  std::vector<GraphPoint> boundary_;
  std::vector<Path> images_;
};

std::string segment_text(const MetricGraph& g, const Segment& s) {
  const Edge& e = g.edge(s.edge);
  if (s.from == 0 && s.to == e.length) return e.id;
  if (s.from == e.length && s.to == 0) return "~" + e.id;
  return e.id + "[" + to_string(s.from) + "->" + to_string(s.to) + "]";
}

}  // namespace

std::vector<std::string> words(std::string_view value) {
  std::vector<std::string> out;
  std::istringstream in{std::string(value)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw SchemaError(number, "expected 'key = value', got '" + line + "'");
      KeyValue kv{number, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1))};
      if (kv.key.empty()) throw SchemaError(number, "empty key");
      out.push_back(std::move(kv));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

bool is_system_key(const std::string& key) {
  return key == "vertices" || key == "edge" || key == "piece" || key == "image" || key == "boundary";
}

PLMarkovMap parse_system(const std::vector<KeyValue>& entries) { return Reader(entries).build(); }

std::string format_system(const PLMarkovMap& f) {
  const MetricGraph& g = f.graph();
  std::ostringstream out;
  out << "vertices =";
  for (const auto& v : g.vertex_names()) out << " " << v;
  out << "\n";
  for (const Edge& e : g.edges()) {
    out << "edge = " << e.id << " : " << g.vertex_name(e.u) << " : " << g.vertex_name(e.v) << " : "
        << to_string(e.length) << "\n";
  }
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    out << "piece = " << f.piece(i).name << " :";
    for (const auto& s : f.piece(i).path) out << " " << segment_text(g, s);
    out << "\n";
  }
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    out << "image = " << f.piece(i).name << " :";
    for (const auto& s : f.image(i)) out << " " << segment_text(g, s);
    out << "\n";
  }
  out << "boundary =";
  for (const auto& p : f.boundary()) out << " " << g.describe(p);
  out << "\n";
  return out.str();
}

}  // namespace entrolab
