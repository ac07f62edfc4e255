#include "invforge/annotate.hpp"

#include "invforge/acsl.hpp"

#include <regex>
#include <sstream>

namespace invforge::annotate {

namespace {

const std::regex annotation_line(
    R"(^\s*//@\s*loop\s+invariant\s*(.*?)\s*;\s*$)");

std::vector<std::string> split_lines(std::string_view source) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t nl = source.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < source.size())
        lines.emplace_back(source.substr(start));
      break;
    }
    lines.emplace_back(source.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string indentation_of(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
    ++i;
  return line.substr(0, i);
}

}  // namespace

strip_result strip_annotations(std::string_view source) {
  strip_result out;
  std::vector<std::string> kept;
  for (auto& line : split_lines(source)) {
    std::smatch m;
    if (std::regex_match(line, m, annotation_line))
      out.removed.push_back(m[1].str());
    else
      kept.push_back(std::move(line));
  }
  out.source = join_lines(kept);
  return out;
}

bool has_mask(std::string_view source) {
  for (const auto& line : split_lines(source)) {
    std::smatch m;
    if (std::regex_match(line, m, annotation_line) &&
        m[1].str() == mask_token)
      return true;
  }
  return false;
}

std::string insert_mask(std::string_view source, int loop_header_line) {
  if (has_mask(source))
    throw already_masked_error();
  std::vector<std::string> lines = split_lines(source);
  if (loop_header_line < 1 ||
      loop_header_line > static_cast<int>(lines.size()))
    throw error("loop header line " + std::to_string(loop_header_line) +
                " out of range");
  const std::string& header = lines[loop_header_line - 1];
  std::string mask_line = indentation_of(header) + "//@ loop invariant " +
                          std::string(mask_token) + ";";
  lines.insert(lines.begin() + (loop_header_line - 1), std::move(mask_line));
  return join_lines(lines);
}

std::string render_for_prompt(std::string_view masked) {
  std::string out(masked);
  std::size_t at = out.find(mask_token);
  while (at != std::string::npos) {
    out.replace(at, mask_token.size(), prompt_token);
    at = out.find(mask_token, at + prompt_token.size());
  }
  return out;
}

std::string instantiate(std::string_view masked, const cminus::program& p,
                        const expr_ptr& inv) {
  std::set<std::string> unknown = acsl::free_vars(inv);
  for (const auto& v : p.scope())
    unknown.erase(v.name);
  if (!unknown.empty())
    throw scope_error(std::move(unknown));

  std::vector<std::string> lines = split_lines(masked);
  for (auto& line : lines) {
    std::smatch m;
    if (std::regex_match(line, m, annotation_line) &&
        m[1].str() == mask_token) {
      line = indentation_of(line) + "//@ loop invariant " + print_expr(inv) +
             ";";
      return join_lines(lines);
    }
  }
  throw error("source has no mask placeholder to instantiate");
}

}  // namespace invforge::annotate
