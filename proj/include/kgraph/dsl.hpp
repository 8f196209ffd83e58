#pragma once

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kgraph/builtins.hpp"
#include "kgraph/graph.hpp"
#include "kgraph/semigroup.hpp"
#include "kgraph/skew.hpp"

namespace kgraph {

/// Parsed form of a .kg document. The format is line-oriented:
///
///   kgraph <k>
///   vertex <name>
///   edge <name> : <color> <range> <- <source>
///   square <e1> <e2> = <e3> <e4>
///   builtin <name> [params...]          (alternative to explicit decls)
///   semigroup <Zk|Nk|group|affine-nn|free-plus> [params]
///   cayley <a> <b> = <c>                (group multiplication table)
///   label <edge> = <element>
///   window <spec>                       (S-window for skew analyses)
///   analyze <directive> [--key=val ...]
///   simplicity <target> [--key=val ...]
///
/// Comments start with '#'. Both sides of a square read range-to-source;
/// the left side carries color order (i,j), the right side (j,i).
struct KgDocument {
  int rank = 0;

  struct EdgeDecl {
    std::string name;
    int color;
    std::string range, source;
  };
  struct SquareDecl {
    std::string e1, e2, e3, e4;
  };
  struct Directive {
    std::string name;
    std::map<std::string, std::string> options;
    int line = 0;
  };

  std::vector<std::string> vertices;
  std::vector<EdgeDecl> edges;
  std::vector<SquareDecl> squares;
  std::optional<std::pair<std::string, std::vector<std::string>>> builtin;

  std::optional<std::string> semigroup_kind;
  std::vector<std::string> semigroup_params;
  std::vector<std::string> group_elements;
  std::vector<std::array<std::string, 3>> cayley;  // a b = c
  std::vector<std::pair<std::string, std::string>> labels;  // edge -> element
  std::optional<std::string> window;
  std::vector<Directive> directives;

  bool has_graph() const {
    return builtin.has_value() || !vertices.empty();
  }

  /// Materializes the declared graph (explicit declarations validate the
  /// square set; a builtin line delegates to the library constructors).
  KGraph build_graph() const {
    if (builtin) return make_builtin(builtin->first, builtin->second);
    KGraphBuilder b(rank);
    for (const auto& v : vertices) b.add_vertex(v);
    for (const auto& e : edges) b.add_edge(e.name, e.color, e.range, e.source);
    for (const auto& s : squares) b.add_square(s.e1, s.e2, s.e3, s.e4);
    return b.build();
  }

  ValidationReport validate_graph() const {
    if (builtin) {
      build_graph();  // throws on bad params
      return ValidationReport{};
    }
    KGraphBuilder b(rank);
    for (const auto& v : vertices) b.add_vertex(v);
    for (const auto& e : edges) b.add_edge(e.name, e.color, e.range, e.source);
    for (const auto& s : squares) b.add_square(s.e1, s.e2, s.e3, s.e4);
    return b.validate();
  }

  std::optional<Semigroup> build_semigroup() const {
    if (!semigroup_kind) return std::nullopt;
    const std::string& k = *semigroup_kind;
    if (k == "Zk" || k == "zk")
      return Semigroup::zk(std::stoi(semigroup_params.at(0)));
    if (k == "Nk" || k == "nk")
      return Semigroup::nk(std::stoi(semigroup_params.at(0)));
    if (k == "affine-nn") return Semigroup::affine_nn();
    if (k == "free-plus")
      return Semigroup::free_plus(std::stoi(semigroup_params.at(0)));
    if (k == "group") {
      std::vector<std::string> names =
          group_elements.empty() ? semigroup_params : group_elements;
      std::map<std::string, int> idx;
      for (std::size_t i = 0; i < names.size(); ++i)
        idx[names[i]] = static_cast<int>(i);
      std::vector<std::vector<int>> table(
          names.size(), std::vector<int>(names.size(), -1));
      for (const auto& [a, b, c] : cayley) {
        if (!idx.count(a) || !idx.count(b) || !idx.count(c))
          throw BadParams("cayley line references unknown element");
        table[idx[a]][idx[b]] = idx[c];
      }
      for (const auto& row : table)
        for (int x : row)
          if (x < 0) throw BadParams("cayley table is incomplete");
      return Semigroup::finite_group(names, table);
    }
    throw BadParams("unknown semigroup kind " + k);
  }

  std::optional<Labeling> build_labeling(const KGraph& g,
                                         const Semigroup& s) const {
    if (labels.empty()) return std::nullopt;
    Labeling lab;
    lab.edge_label.resize(g.num_edges());
    std::vector<char> set(g.num_edges(), 0);
    for (const auto& [edge, elem] : labels) {
      int e = g.edge_index(edge);
      lab.edge_label[e] = elem == "deg" ? SgElement{[&] {
        std::vector<long long> v(s.rank(), 0);
        v[g.edge(e).color - 1] = 1;
        return v;
      }()}
                                        : s.parse(elem);
      set[e] = 1;
    }
    for (int e = 0; e < g.num_edges(); ++e)
      if (!set[e])
        throw BadParams("edge " + g.edge(e).name + " has no label");
    return lab;
  }
};

namespace detail {

struct LineLexer {
  std::string text;
  int line_no;
  std::vector<std::pair<std::string, int>> tokens;  // token, column

  explicit LineLexer(const std::string& raw, int ln) : text(raw), line_no(ln) {
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      if (raw[i] == '#') break;
      std::size_t start = i;
      while (i < raw.size() &&
             !std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      tokens.emplace_back(raw.substr(start, i - start),
                          static_cast<int>(start) + 1);
    }
  }

  bool empty() const { return tokens.empty(); }
  const std::string& word(std::size_t i) const {
    if (i >= tokens.size())
      throw ParseError("unexpected end of line", line_no,
                       static_cast<int>(text.size()) + 1);
    return tokens[i].first;
  }
  int col(std::size_t i) const {
    return i < tokens.size() ? tokens[i].second
                             : static_cast<int>(text.size()) + 1;
  }
  void expect(std::size_t i, const std::string& tok) const {
    if (word(i) != tok)
      throw ParseError("expected '" + tok + "', found '" + word(i) + "'",
                       line_no, col(i));
  }
  int integer(std::size_t i) const {
    try {
      return std::stoi(word(i));
    } catch (...) {
      throw ParseError("expected an integer, found '" + word(i) + "'",
                       line_no, col(i));
    }
  }
};

}  // namespace detail

/// Parses .kg text with precise error positions.
inline KgDocument parse_kg(const std::string& text) {
  KgDocument doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool saw_rank = false;
  std::map<std::string, int> vertex_lines, edge_lines;
  while (std::getline(in, raw)) {
    ++line_no;
    detail::LineLexer lx(raw, line_no);
    if (lx.empty()) continue;
    const std::string& head = lx.word(0);
    if (head == "kgraph") {
      doc.rank = lx.integer(1);
      if (doc.rank < 1)
        throw ParseError("rank must be at least 1", line_no, lx.col(1));
      saw_rank = true;
      continue;
    }
    if (!saw_rank)
      throw ParseError("the document must start with 'kgraph <k>'", line_no,
                       lx.col(0));
    if (head == "vertex") {
      const std::string& name = lx.word(1);
      if (vertex_lines.count(name))
        throw ParseError("duplicate vertex name '" + name + "'", line_no,
                         lx.col(1));
      vertex_lines[name] = line_no;
      doc.vertices.push_back(name);
    } else if (head == "edge") {
      // edge <name> : <color> <range> <- <source>
      const std::string& name = lx.word(1);
      if (edge_lines.count(name))
        throw ParseError("duplicate edge name '" + name + "'", line_no,
                         lx.col(1));
      lx.expect(2, ":");
      int color = lx.integer(3);
      const std::string& range = lx.word(4);
      lx.expect(5, "<-");
      const std::string& source = lx.word(6);
      for (const auto& v : {range, source})
        if (!vertex_lines.count(v))
          throw ParseError("edge references undeclared vertex '" + v + "'",
                           line_no, lx.col(4));
      if (color < 1 || color > doc.rank)
        throw ParseError("color out of range 1.." + std::to_string(doc.rank),
                         line_no, lx.col(3));
      edge_lines[name] = line_no;
      doc.edges.push_back({name, color, range, source});
    } else if (head == "square") {
      // square <e1> <e2> = <e3> <e4>
      lx.expect(3, "=");
      std::array<std::string, 4> e{lx.word(1), lx.word(2), lx.word(4),
                                   lx.word(5)};
      for (std::size_t i = 0; i < 4; ++i)
        if (!edge_lines.count(e[i]))
          throw ParseError(
              "square references undeclared edge '" + e[i] + "'", line_no,
              lx.col(i < 2 ? i + 1 : i + 2));
      doc.squares.push_back({e[0], e[1], e[2], e[3]});
    } else if (head == "builtin") {
      std::vector<std::string> params;
      for (std::size_t i = 2; i < lx.tokens.size(); ++i)
        params.push_back(lx.word(i));
      doc.builtin = {lx.word(1), params};
    } else if (head == "semigroup") {
      doc.semigroup_kind = lx.word(1);
      for (std::size_t i = 2; i < lx.tokens.size(); ++i)
        doc.semigroup_params.push_back(lx.word(i));
      if (*doc.semigroup_kind == "group")
        doc.group_elements = doc.semigroup_params;
    } else if (head == "cayley") {
      lx.expect(3, "=");
      doc.cayley.push_back({lx.word(1), lx.word(2), lx.word(4)});
    } else if (head == "label") {
      lx.expect(2, "=");
      if (!edge_lines.count(lx.word(1)) && !doc.builtin)
        throw ParseError("label references undeclared edge '" + lx.word(1) +
                             "'",
                         line_no, lx.col(1));
      doc.labels.emplace_back(lx.word(1), lx.word(3));
    } else if (head == "window") {
      doc.window = lx.word(1);
    } else if (head == "analyze" || head == "simplicity") {
      KgDocument::Directive d;
      d.line = line_no;
      std::size_t start;
      if (head == "simplicity") {
        d.name = "simplicity";
        d.options["target"] = lx.word(1);
        start = 2;
      } else {
        d.name = lx.word(1);
        start = 2;
      }
      for (std::size_t i = start; i < lx.tokens.size(); ++i) {
        const std::string& opt = lx.word(i);
        if (opt.rfind("--", 0) != 0)
          throw ParseError("options look like --key=value", line_no,
                           lx.col(i));
        auto eq = opt.find('=');
        if (eq == std::string::npos)
          d.options[opt.substr(2)] = "true";
        else
          d.options[opt.substr(2, eq - 2)] = opt.substr(eq + 1);
      }
      doc.directives.push_back(std::move(d));
    } else {
      throw ParseError("unknown declaration '" + head + "'", line_no,
                       lx.col(0));
    }
  }
  if (!saw_rank) throw ParseError("empty document", 1, 1);
  return doc;
}

/// Prints a document back to .kg text; parse(print(parse(x))) == parse(x).
inline std::string print_kg(const KgDocument& doc) {
  std::ostringstream os;
  os << "kgraph " << doc.rank << "\n";
  if (doc.builtin) {
    os << "builtin " << doc.builtin->first;
    for (const auto& p : doc.builtin->second) os << ' ' << p;
    os << "\n";
  } else {
    for (const auto& v : doc.vertices) os << "vertex " << v << "\n";
    for (const auto& e : doc.edges)
      os << "edge " << e.name << " : " << e.color << ' ' << e.range << " <- "
         << e.source << "\n";
    for (const auto& s : doc.squares)
      os << "square " << s.e1 << ' ' << s.e2 << " = " << s.e3 << ' ' << s.e4
         << "\n";
  }
  if (doc.semigroup_kind) {
    os << "semigroup " << *doc.semigroup_kind;
    for (const auto& p : doc.semigroup_params) os << ' ' << p;
    os << "\n";
    for (const auto& [a, b, c] : doc.cayley)
      os << "cayley " << a << ' ' << b << " = " << c << "\n";
  }
  for (const auto& [e, v] : doc.labels) os << "label " << e << " = " << v
                                           << "\n";
  if (doc.window) os << "window " << *doc.window << "\n";
  for (const auto& d : doc.directives) {
    if (d.name == "simplicity") {
      os << "simplicity " << d.options.at("target");
      for (const auto& [k, v] : d.options)
        if (k != "target") os << " --" << k << '=' << v;
    } else {
      os << "analyze " << d.name;
      for (const auto& [k, v] : d.options) os << " --" << k << '=' << v;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace kgraph
