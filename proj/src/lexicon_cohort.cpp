#include "pmodel/lexicon_cohort.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pmodel {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

bool member_order(const LexEntry& a, const LexEntry& b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  if (a.form != b.form) return a.form < b.form;
  return a.category < b.category;
}

}  // namespace

LexiconError::LexiconError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Lexicon::Lexicon(std::vector<LexEntry> entries) : entries_(std::move(entries)) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : entries_) {
    if (e.form.empty()) throw LexiconError(0, "empty form");
    if (e.form.find(kUnheard) != std::string::npos) throw LexiconError(0, "form '" + e.form + "' contains '#'");
    if (!seen.emplace(e.form, e.category).second)
      throw LexiconError(0, "duplicate entry " + e.form + ":" + e.category);
  }
}

Lexicon parse_lexicon(std::string_view text) {
  std::vector<LexEntry> entries;
  std::size_t lineno = 0;
  for (const auto& raw : split(text, '\n')) {
    ++lineno;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() < 4 || cols.size() > 5) throw LexiconError(lineno, "expected 4 or 5 tab-separated columns");
    LexEntry e;
    e.form = cols[0];
    e.category = cols[1];
    if (e.form.empty() || e.category.empty()) throw LexiconError(lineno, "empty form or category");
    if (!cols[2].empty())
      for (const auto& f : split(cols[2], ','))
        if (!f.empty()) e.features.insert(f);
    const std::string& freq = cols[3];
    if (freq.empty() || !std::all_of(freq.begin(), freq.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw LexiconError(lineno, "frequency must be a nonnegative integer");
    try {
      e.frequency = std::stoull(freq);
    } catch (const std::out_of_range&) {
      throw LexiconError(lineno, "frequency out of range");
    }
    if (cols.size() == 5 && !cols[4].empty()) e.symbol = cols[4];
    entries.push_back(std::move(e));
  }
  try {
    return Lexicon(std::move(entries));
  } catch (const LexiconError& e) {
    throw LexiconError(0, e.what());
  }
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError(0, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str());
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

Cohort access(const Lexicon& lex, std::string_view prefix) {
  Cohort c{std::string(prefix), {}};
  for (const auto& e : lex.entries())
    if (std::string_view(e.form).starts_with(prefix)) c.members.push_back(e);
  std::sort(c.members.begin(), c.members.end(), member_order);
  return c;
}

std::vector<Candidate> select(const Cohort& c, std::string_view observed) {
  std::vector<Candidate> out;
  out.reserve(c.members.size());
  for (const auto& e : c.members) out.push_back({e, edit_distance(observed, e.form)});
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return member_order(a.entry, b.entry);
  });
  return out;
}

std::vector<Candidate> integrate(const std::vector<Candidate>& ranked, const std::set<std::string>& expected) {
  std::vector<Candidate> out;
  for (const auto& c : ranked)
    if (expected.count(c.entry.category)) out.push_back(c);
  return out;
}

std::string_view heard_prefix(std::string_view token) { return token.substr(0, token.find(kUnheard)); }

bool Recognition::complete() const { return failed_slots().empty(); }

std::vector<std::size_t> Recognition::failed_slots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (!slots[i].best) out.push_back(i);
  return out;
}

NoCandidate::NoCandidate(std::vector<std::size_t> slots)
    : std::runtime_error([&] {
        std::string m = "NoCandidate: slot";
        for (std::size_t s : slots) m += " " + std::to_string(s);
        return m;
      }()),
      slots_(std::move(slots)) {}

Recognition recognize(const Lexicon& lex, const std::vector<std::string>& tokens,
                      const std::vector<std::optional<std::set<std::string>>>& expected,
                      const RecognizeOptions& opts) {
  if (tokens.empty()) throw std::invalid_argument("recognize needs at least one token");
  Recognition r;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    SlotResult slot{tokens[i], std::nullopt, {}};
    auto ranked = select(access(lex, heard_prefix(tokens[i])), tokens[i]);
    if (i < expected.size() && expected[i]) ranked = integrate(ranked, *expected[i]);
    for (auto& c : ranked) {
      auto limit = static_cast<std::size_t>(std::ceil(static_cast<double>(c.entry.form.size()) * opts.max_fraction));
      if (c.distance <= limit) slot.ranked.push_back(std::move(c));
    }
    if (!slot.ranked.empty()) slot.best = slot.ranked.front();
    r.slots.push_back(std::move(slot));
  }
  return r;
}

std::vector<LexEntry> recognized_entries(const Recognition& r) {
  auto failed = r.failed_slots();
  if (!failed.empty()) throw NoCandidate(std::move(failed));
  std::vector<LexEntry> out;
  for (const auto& s : r.slots) out.push_back(s.best->entry);
  return out;
}

}  // namespace pmodel
