#include "fdia/game.hpp"

#include <algorithm>
#include <charconv>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fdia::game {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

boost::multiprecision::cpp_int parse_int(std::string_view s) {
  if (!all_digits(s)) throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return boost::multiprecision::cpp_int(std::string(s));
}

std::size_t index(Player p) { return static_cast<std::size_t>(p); }

Profile with_move(Profile p, Player player, std::size_t move) {
  switch (player) {
    case Player::Ar: p.ar = kArMoves[move]; break;
    case Player::Ag: p.ag = kAgMoves[move]; break;
    case Player::AV: p.av = kAvMoves[move]; break;
  }
  return p;
}

std::size_t move_count(Player p) { return p == Player::Ar ? kArMoves.size() : kAgMoves.size(); }

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  bool negative = s[0] == '-';
  std::string_view body(s);
  if (negative || s[0] == '+') body.remove_prefix(1);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(body.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    value = Rational(parse_int(body.substr(0, slash)), den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw std::invalid_argument("not a number: '" + s + "'");
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    auto w = whole.empty() ? boost::multiprecision::cpp_int(0) : parse_int(whole);
    auto f = frac.empty() ? boost::multiprecision::cpp_int(0) : parse_int(frac);
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(parse_int(body));
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string_view name(Player p) {
  switch (p) {
    case Player::Ar: return "Ar";
    case Player::Ag: return "Ag";
    case Player::AV: return "AV";
  }
  return "?";
}
std::string_view name(ArMove m) { return m == ArMove::A ? "A" : "N"; }
std::string_view name(AgMove m) {
  switch (m) {
    case AgMove::H: return "H";
    case AgMove::F: return "F";
    case AgMove::Na: return "Na";
  }
  return "?";
}
std::string_view name(AvMove m) {
  switch (m) {
    case AvMove::Py: return "Py";
    case AvMove::Pn: return "Pn";
    case AvMove::TwoP: return "2P";
  }
  return "?";
}

std::size_t Profile::cell() const {
  return static_cast<std::size_t>(ar) * 9 + static_cast<std::size_t>(ag) * 3 + static_cast<std::size_t>(av);
}

Profile Profile::from_cell(std::size_t cell) {
  return {kArMoves[cell / 9], kAgMoves[(cell / 3) % 3], kAvMoves[cell % 3]};
}

std::string Profile::str() const {
  return "(" + std::string(name(ar)) + ", " + std::string(name(ag)) + ", " + std::string(name(av)) + ")";
}

std::array<Profile, kProfileCount> all_profiles() {
  std::array<Profile, kProfileCount> out;
  for (std::size_t c = 0; c < kProfileCount; ++c) out[c] = Profile::from_cell(c);
  return out;
}

std::vector<std::string> PayoffParams::violations() const {
  std::vector<std::string> out;
  auto need = [&](const Rational& v, const char* key) {
    if (v < 0) out.push_back(std::string(key) + " must be >= 0 (got " + format_rational(v) + ")");
  };
  need(R_A, "R_A");
  need(P_N, "P_N");
  need(R_H, "R_H");
  need(P_forge, "P_forge");
  need(P_Na, "P_Na");
  return out;
}

GameSpec GameSpec::parse(std::string_view text) {
  GameSpec spec;
  PayoffParams& p = spec.payoffs;
  const std::map<std::string, Rational*> keys = {{"R_A", &p.R_A},         {"P_N", &p.P_N},   {"R_H", &p.R_H},
                                                 {"P_forge", &p.P_forge}, {"P_Na", &p.P_Na}, {"U_Py", &p.U_Py},
                                                 {"U_Pn", &p.U_Pn}};
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    auto it = keys.find(key);
    if (it == keys.end()) throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw std::invalid_argument("duplicate key '" + key + "'");
    try {
      *it->second = parse_rational(std::string_view(line).substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& [k, v] : keys) {
    if (!seen.contains(k)) throw std::invalid_argument("missing key '" + k + "'");
  }
  return spec;
}

Utilities utility(const GameSpec& spec, const Profile& profile) {
  const PayoffParams& p = spec.payoffs;
  Utilities u;
  u[index(Player::Ar)] = profile.ar == ArMove::A ? p.R_A : Rational(-p.P_N);
  switch (profile.ag) {
    case AgMove::H: u[index(Player::Ag)] = p.R_H; break;
    case AgMove::F: u[index(Player::Ag)] = -p.P_forge; break;
    case AgMove::Na: u[index(Player::Ag)] = -p.P_Na; break;
  }
  switch (profile.av) {
    case AvMove::Py: u[index(Player::AV)] = p.U_Py; break;
    case AvMove::Pn: u[index(Player::AV)] = p.U_Pn; break;
    case AvMove::TwoP: u[index(Player::AV)] = p.U_Py + p.U_Pn; break;
  }
  return u;
}

PayoffTable payoff_table(const GameSpec& spec) {
  PayoffTable t;
  for (const auto& p : all_profiles()) t.at(p) = utility(spec, p);
  return t;
}

PayoffTable rescale(const PayoffTable& table, Player player, const Rational& a, const Rational& b) {
  if (a <= 0) throw std::invalid_argument("rescaling factor must be positive");
  PayoffTable out = table;
  for (auto& u : out.cells) u[index(player)] = a * u[index(player)] + b;
  return out;
}

std::vector<Profile> best_response(const PayoffTable& table, Player player, const Profile& others) {
  std::vector<Profile> out;
  Rational best;
  for (std::size_t m = 0; m < move_count(player); ++m) {
    Profile p = with_move(others, player, m);
    const Rational& u = table.at(p)[index(player)];
    if (out.empty() || u > best) {
      out.assign(1, p);
      best = u;
    } else if (u == best) {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Profile> best_response(const GameSpec& spec, Player player, const Profile& others) {
  return best_response(payoff_table(spec), player, others);
}

bool is_ne(const PayoffTable& table, const Profile& p) {
  for (Player player : {Player::Ar, Player::Ag, Player::AV}) {
    auto br = best_response(table, player, p);
    if (std::find(br.begin(), br.end(), p) == br.end()) return false;
  }
  return true;
}

std::vector<Profile> solve_ne(const PayoffTable& table) {
  std::vector<Profile> out;
  for (const auto& p : all_profiles()) {
    if (is_ne(table, p)) out.push_back(p);
  }
  return out;
}

std::vector<Profile> solve_ne(const GameSpec& spec) { return solve_ne(payoff_table(spec)); }

namespace {

// Explicit extensive-form tree: depth 0 = Ar, 1 = Ag, 2 = AV, 3 = leaf.
struct Node {
  Profile path;
  int depth = 0;
  std::vector<std::unique_ptr<Node>> children;
};

std::unique_ptr<Node> build(Profile path, int depth) {
  auto n = std::make_unique<Node>();
  n->path = path;
  n->depth = depth;
  if (depth < 3) {
    auto player = static_cast<Player>(depth);
    for (std::size_t m = 0; m < move_count(player); ++m) n->children.push_back(build(with_move(path, player, m), depth + 1));
  }
  return n;
}

// Subgame-perfect outcomes of the subtree. Subtrees are independent, so an
// outcome o of child c survives when the mover weakly prefers it to the
// worst selectable outcome of every sibling.
std::vector<Profile> solve(const Node& n, const PayoffTable& table) {
  if (n.children.empty()) return {n.path};
  std::size_t mover = static_cast<std::size_t>(n.depth);
  std::vector<std::vector<Profile>> sub;
  Rational threshold;
  bool first = true;
  for (const auto& c : n.children) {
    sub.push_back(solve(*c, table));
    Rational worst = table.at(sub.back().front())[mover];
    for (const auto& o : sub.back()) worst = std::min(worst, table.at(o)[mover]);
    if (first || worst > threshold) threshold = worst;
    first = false;
  }
  std::vector<Profile> out;
  for (const auto& outcomes : sub) {
    for (const auto& o : outcomes) {
      if (table.at(o)[mover] >= threshold) out.push_back(o);
    }
  }
  return out;
}

}  // namespace

std::vector<Profile> backward_induction(const PayoffTable& table) {
  auto root = build(Profile{}, 0);
  auto out = solve(*root, table);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IncentiveReport validate_incentive(const GameSpec& spec) {
  IncentiveReport r;
  r.issues = spec.payoffs.violations();
  PayoffTable table = payoff_table(spec);
  r.equilibria = solve_ne(table);
  const Profile target{ArMove::A, AgMove::H, AvMove::TwoP};
  r.target_is_ne = is_ne(table, target);
  r.unique = r.target_is_ne && r.equilibria.size() == 1;

  const PayoffParams& p = spec.payoffs;
  auto compare = [&](const Rational& lhs, const Rational& rhs, const std::string& inequality, Player who,
                     std::string_view keep, std::string_view other) {
    if (lhs > rhs) return;
    std::string values = " (" + format_rational(lhs) + " vs " + format_rational(rhs) + ")";
    if (lhs == rhs) {
      r.issues.push_back(inequality + " fails" + values + ": " + std::string(name(who)) + " tie between " +
                         std::string(keep) + " and " + std::string(other));
    } else {
      r.issues.push_back(inequality + " fails" + values + ": " + std::string(name(who)) + " prefers " +
                         std::string(other) + " over " + std::string(keep));
    }
  };
  compare(p.R_A, -p.P_N, "R_A > -P_N", Player::Ar, "A", "N");
  compare(p.R_H, -p.P_forge, "R_H > -P_forge", Player::Ag, "H", "F");
  compare(p.R_H, -p.P_Na, "R_H > -P_Na", Player::Ag, "H", "Na");
  compare(p.U_Py + p.U_Pn, p.U_Py, "U_Py + U_Pn > U_Py (U_Pn > 0)", Player::AV, "2P", "Py");
  compare(p.U_Py + p.U_Pn, p.U_Pn, "U_Py + U_Pn > U_Pn (U_Py > 0)", Player::AV, "2P", "Pn");
  return r;
}

void write_report(std::ostream& out, const GameSpec& spec, const IncentiveReport& report) {
  const PayoffParams& p = spec.payoffs;
  out << "payoffs: R_A=" << format_rational(p.R_A) << " P_N=" << format_rational(p.P_N)
      << " R_H=" << format_rational(p.R_H) << " P_forge=" << format_rational(p.P_forge)
      << " P_Na=" << format_rational(p.P_Na) << " U_Py=" << format_rational(p.U_Py)
      << " U_Pn=" << format_rational(p.U_Pn) << "\n";
  out << "nash equilibria (" << report.equilibria.size() << "):";
  for (const auto& e : report.equilibria) out << " " << e.str();
  out << "\n";
  auto bi = backward_induction(payoff_table(spec));
  out << "backward induction:";
  for (const auto& e : bi) out << " " << e.str();
  out << "\n";
  out << "(A, H, 2P) is " << (report.target_is_ne ? "" : "NOT ") << "a Nash equilibrium"
      << (report.unique ? " and the unique one" : "") << "\n";
  if (report.issues.empty()) {
    out << "incentives: ok\n";
  } else {
    for (const auto& issue : report.issues) out << "issue: " << issue << "\n";
  }
}

void write_profile_rows(std::ostream& out, const GameSpec& spec) {
  PayoffTable table = payoff_table(spec);
  out << "s_Ar,s_Ag,s_AV,u_Ar,u_Ag,u_AV,is_ne\n";
  for (const auto& p : all_profiles()) {
    const auto& u = table.at(p);
    out << name(p.ar) << "," << name(p.ag) << "," << name(p.av) << "," << format_rational(u[0]) << ","
        << format_rational(u[1]) << "," << format_rational(u[2]) << "," << (is_ne(table, p) ? 1 : 0) << "\n";
  }
}

}  // namespace fdia::game
