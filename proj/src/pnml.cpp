#include "pql/pnml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "pql/error.hpp"

namespace pql {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string attribute(const pt::ptree& node, const char* name) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

const std::set<std::string> kNodeChildren = {"<xmlattr>", "<xmlcomment>", "name", "initialMarking",
                                             "graphics", "toolspecific", "inscription"};

class Reader {
 public:
  PnmlResult run(const pt::ptree& root) {
    auto doc = root.get_child_optional("pnml");
    const pt::ptree& top = doc ? *doc : root;
    bool found = false;
    for (const auto& [tag, child] : top) {
      if (tag == "net") {
        if (found) {
          warn("only the first net is read");
          continue;
        }
        found = true;
        walk(child);
      } else if (tag != "<xmlattr>" && tag != "<xmlcomment>") {
        warn("ignored element <" + tag + ">");
      }
    }
    if (!found) throw PnmlError("no <net> element");
    PnmlResult r;
    r.system = builder_.build();
    r.warnings = std::move(warnings_);
    return r;
  }

 private:
  void warn(std::string w) { warnings_.push_back(std::move(w)); }

  void check_children(const pt::ptree& node, const std::string& owner) {
    for (const auto& [tag, child] : node)
      if (!kNodeChildren.count(tag)) warn("ignored element <" + tag + "> in " + owner);
  }

  void walk(const pt::ptree& container) {
    for (const auto& [tag, node] : container) {
      if (tag == "page") {
        walk(node);
      } else if (tag == "place") {
        auto id = attribute(node, "id");
        if (id.empty()) throw PnmlError("place without id");
        auto text = trim(node.get<std::string>("initialMarking.text", "0"));
        unsigned tokens = 0;
        try {
          std::size_t used = 0;
          long v = std::stol(text, &used);
          if (used != text.size() || v < 0) throw std::invalid_argument(text);
          tokens = static_cast<unsigned>(v);
        } catch (const std::exception&) {
          throw PnmlError("bad initial marking for place " + id + ": " + text);
        }
        builder_.place(id, tokens);
        check_children(node, "place " + id);
      } else if (tag == "transition") {
        auto id = attribute(node, "id");
        if (id.empty()) throw PnmlError("transition without id");
        builder_.transition(id, trim(node.get<std::string>("name.text", "")));
        check_children(node, "transition " + id);
      } else if (tag == "arc") {
        auto source = attribute(node, "source"), target = attribute(node, "target");
        if (source.empty() || target.empty()) throw PnmlError("arc without source or target");
        arcs_.emplace_back(source, target);
        auto weight = trim(node.get<std::string>("inscription.text", "1"));
        if (weight != "1") throw PnmlError("arc weights other than 1 are not supported");
      } else if (tag == "name" || tag == "<xmlattr>" || tag == "<xmlcomment>") {
      } else {
        warn("ignored element <" + tag + ">");
      }
    }
    for (const auto& [s, t] : arcs_) {
      if (!builder_.has_node(s) || !builder_.has_node(t))
        throw PnmlError("arc " + s + " -> " + t + " refers to an unknown node");
      builder_.arc(s, t);
    }
    arcs_.clear();
  }

  NetBuilder builder_;
  std::vector<std::pair<std::string, std::string>> arcs_;
  std::vector<std::string> warnings_;
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

PnmlResult read_pnml(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw PnmlError(std::string("malformed PNML: ") + e.what());
  }
  try {
    return Reader().run(tree);
  } catch (const ModelError& e) {
    throw PnmlError(std::string("malformed PNML: ") + e.what());
  }
}

PnmlResult read_pnml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PnmlError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_pnml(buf.str());
}

std::string write_pnml(const NetSystem& system, const std::string& net_id) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<pnml>\n  <net id=\"" << escape(net_id)
      << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n    <page id=\"page\">\n";
  for (const auto& p : system.places()) {
    out << "      <place id=\"" << escape(p) << "\">";
    if (auto n = system.initial_marking()[p])
      out << "<initialMarking><text>" << n << "</text></initialMarking>";
    out << "</place>\n";
  }
  for (std::size_t t = 0; t < system.transition_count(); ++t) {
    out << "      <transition id=\"" << escape(system.transitions()[t]) << "\">";
    if (!system.silent(t)) out << "<name><text>" << escape(system.label(t)) << "</text></name>";
    out << "</transition>\n";
  }
  std::size_t k = 0;
  for (const auto& [s, t] : system.arcs())
    out << "      <arc id=\"a" << k++ << "\" source=\"" << escape(s) << "\" target=\"" << escape(t)
        << "\"/>\n";
  out << "    </page>\n  </net>\n</pnml>\n";
  return out.str();
}

}  // namespace pql
