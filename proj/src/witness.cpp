#include "invforge/witness.hpp"

#include <openssl/evp.h>

#include <regex>
#include <set>
#include <sstream>

namespace invforge::witness {

namespace {

// C precedence of our operators; higher binds tighter.
int prec_of(binary_op op) {
  switch (op) {
    case binary_op::mul:
    case binary_op::div:
    case binary_op::mod:
      return 8;
    case binary_op::add:
    case binary_op::sub:
      return 7;
    case binary_op::shl:
    case binary_op::shr:
      return 6;
    case binary_op::lt:
    case binary_op::le:
    case binary_op::gt:
    case binary_op::ge:
      return 5;
    case binary_op::eq:
    case binary_op::ne:
      return 4;
    case binary_op::logical_and:
      return 3;
    case binary_op::logical_or:
    case binary_op::implies:  // rewritten into ||
      return 2;
  }
  return 0;
}

constexpr int unary_prec = 9;
constexpr int primary_prec = 100;

struct rendered {
  std::string text;
  int prec;
};

rendered render(const expr& e);

std::string child(const expr_ptr& e, int parent_prec, bool right_side) {
  rendered r = render(*e);
  bool needs_parens =
      r.prec < parent_prec || (r.prec == parent_prec && right_side);
  return needs_parens ? "(" + r.text + ")" : r.text;
}

rendered render(const expr& e) {
  if (const auto* lit = std::get_if<expr::literal>(&e.node)) {
    std::string text = lit->value.str();
    return {text, lit->value < 0 ? unary_prec : primary_prec};
  }
  if (const auto* id = std::get_if<expr::identifier>(&e.node))
    return {id->name, primary_prec};
  if (const auto* u = std::get_if<expr::unary>(&e.node)) {
    return {std::string(unary_op_token(u->op)) +
                child(u->operand, unary_prec, false),
            unary_prec};
  }
  const auto& b = std::get<expr::binary>(e.node);
  if (b.op == binary_op::implies) {
    // material implication, spelled so each side stays self-delimited
    return {"(!(" + render(*b.lhs).text + ")) || (" + render(*b.rhs).text +
                ")",
            prec_of(binary_op::logical_or)};
  }
  int p = prec_of(b.op);
  return {child(b.lhs, p, false) + " " + binary_op_token(b.op) + " " +
              child(b.rhs, p, true),
          p};
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace

std::string c_expr(const expr& e) {
  return render(e).text;
}

document export_witness(const cminus::program& p, const expr_ptr& inv,
                        const std::string& program_file,
                        const std::string& source) {
  document doc;
  doc.invariant = c_expr(inv);
  doc.loop_line = p.task_loop.header_line;

  std::ostringstream out;
  out << R"(<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance">
  <key id="witness-type" attr.name="witness-type" for="graph"/>
  <key id="sourcecodelang" attr.name="sourcecodelang" for="graph"/>
  <key id="producer" attr.name="producer" for="graph"/>
  <key id="specification" attr.name="specification" for="graph"/>
  <key id="programfile" attr.name="programfile" for="graph"/>
  <key id="programhash" attr.name="programhash" for="graph"/>
  <key id="architecture" attr.name="architecture" for="graph"/>
  <key id="entry" attr.name="isEntryNode" for="node"><default>false</default></key>
  <key id="invariant" attr.name="invariant" for="node"/>
  <key id="invariant.scope" attr.name="invariant.scope" for="node"/>
  <key id="startline" attr.name="startline" for="edge"/>
  <key id="enterLoopHead" attr.name="enterLoopHead" for="edge"><default>false</default></key>
  <graph edgedefault="directed">
    <data key="witness-type">correctness_witness</data>
    <data key="sourcecodelang">C</data>
    <data key="producer">invforge</data>
    <data key="specification">CHECK( init(main()), LTL(G ! call(reach_error())) )</data>
)";
  out << "    <data key=\"programfile\">" << xml_escape(program_file)
      << "</data>\n";
  out << "    <data key=\"programhash\">" << sha256_hex(source) << "</data>\n";
  out << "    <data key=\"architecture\">32bit</data>\n";
  out << "    <node id=\"N0\"><data key=\"entry\">true</data></node>\n";
  out << "    <node id=\"N1\"><data key=\"invariant\">"
      << xml_escape(doc.invariant) << "</data>"
      << "<data key=\"invariant.scope\">" << xml_escape(p.function)
      << "</data></node>\n";
  out << "    <node id=\"N2\"/>\n";
  out << "    <edge source=\"N0\" target=\"N1\"><data key=\"startline\">"
      << doc.loop_line
      << "</data><data key=\"enterLoopHead\">true</data></edge>\n";
  out << "    <edge source=\"N1\" target=\"N2\"><data key=\"startline\">"
      << p.assertion_line << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";

  doc.graphml = out.str();
  return doc;
}

void validate_document(const std::string& graphml) {
  auto require = [&](bool cond, const std::string& what) {
    if (!cond)
      throw witness_error("witness schema violation: " + what);
  };

  require(graphml.find("<graphml") != std::string::npos, "no graphml root");
  require(graphml.find("<data key=\"witness-type\">correctness_witness</data>") !=
              std::string::npos,
          "witness-type is not correctness_witness");
  for (const char* key : {"sourcecodelang", "specification", "programfile",
                          "programhash", "architecture"}) {
    require(graphml.find("<data key=\"" + std::string(key) + "\">") !=
                std::string::npos,
            std::string("missing graph data ") + key);
  }

  static const std::regex node_re("<node id=\"([^\"]+)\"");
  std::set<std::string> nodes;
  for (std::sregex_iterator it(graphml.begin(), graphml.end(), node_re), end;
       it != end; ++it)
    nodes.insert((*it)[1].str());
  require(!nodes.empty(), "no nodes");

  static const std::regex entry_re(
      "<node id=\"[^\"]+\"><data key=\"entry\">true</data>");
  std::ptrdiff_t entries =
      std::distance(std::sregex_iterator(graphml.begin(), graphml.end(),
                                         entry_re),
                    std::sregex_iterator());
  require(entries == 1, "expected exactly one entry node, found " +
                            std::to_string(entries));

  static const std::regex inv_re("<data key=\"invariant\">");
  std::ptrdiff_t invariants =
      std::distance(std::sregex_iterator(graphml.begin(), graphml.end(),
                                         inv_re),
                    std::sregex_iterator());
  require(invariants == 1, "expected exactly one invariant node, found " +
                               std::to_string(invariants));

  static const std::regex edge_re(
      "<edge source=\"([^\"]+)\" target=\"([^\"]+)\"");
  bool any_edge = false;
  for (std::sregex_iterator it(graphml.begin(), graphml.end(), edge_re), end;
       it != end; ++it) {
    any_edge = true;
    require(nodes.count((*it)[1].str()) == 1,
            "edge source " + (*it)[1].str() + " is not a node");
    require(nodes.count((*it)[2].str()) == 1,
            "edge target " + (*it)[2].str() + " is not a node");
  }
  require(any_edge, "no edges");
}

}  // namespace invforge::witness
