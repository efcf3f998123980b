#pragma once

// The three-player auditing game: auditor ES (Ar) moves first, the audited
// ES (Ag) second and the application vendor (AV) last.
//
//   U_Ar = R_A (A) | -P_N (N)
//   U_Ag = R_H (H) | -P_forge (F) | -P_Na (Na)
//   U_AV = U_Py (Py) | U_Pn (Pn) | U_Py + U_Pn (2P)
//
// Payoffs are exact rationals so ties are detected exactly.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fdia::game {

using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "-3/4" or "0.125" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

enum class Player { Ar, Ag, AV };
enum class ArMove { A, N };
enum class AgMove { H, F, Na };
enum class AvMove { Py, Pn, TwoP };

inline constexpr std::array<ArMove, 2> kArMoves = {ArMove::A, ArMove::N};
inline constexpr std::array<AgMove, 3> kAgMoves = {AgMove::H, AgMove::F, AgMove::Na};
inline constexpr std::array<AvMove, 3> kAvMoves = {AvMove::Py, AvMove::Pn, AvMove::TwoP};

std::string_view name(Player p);
std::string_view name(ArMove m);
std::string_view name(AgMove m);
std::string_view name(AvMove m);

struct Profile {
  ArMove ar = ArMove::A;
  AgMove ag = AgMove::H;
  AvMove av = AvMove::TwoP;

  std::size_t cell() const;  // position in the 2 x 3 x 3 table
  static Profile from_cell(std::size_t cell);
  std::string str() const;  // "(A, H, 2P)"
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

inline constexpr std::size_t kProfileCount = 18;
std::array<Profile, kProfileCount> all_profiles();

// Utilities indexed by Player.
using Utilities = std::array<Rational, 3>;

struct PayoffParams {
  Rational R_A, P_N, R_H, P_forge, P_Na, U_Py, U_Pn;

  // Sign violations (rewards and penalties must be >= 0); empty when valid.
  std::vector<std::string> violations() const;
};

struct GameSpec {
  PayoffParams payoffs;

  // key=value lines; '#' starts a comment. Keys: R_A P_N R_H P_forge P_Na U_Py U_Pn.
  static GameSpec parse(std::string_view text);
};

// The normal form: one utility vector per profile.
struct PayoffTable {
  std::array<Utilities, kProfileCount> cells;

  const Utilities& at(const Profile& p) const { return cells[p.cell()]; }
  Utilities& at(const Profile& p) { return cells[p.cell()]; }
};

Utilities utility(const GameSpec& spec, const Profile& profile);
PayoffTable payoff_table(const GameSpec& spec);
// u -> a * u + b for one player's utilities; requires a > 0.
PayoffTable rescale(const PayoffTable& table, Player player, const Rational& a, const Rational& b);

// Strategies of `player` maximizing its utility with the others fixed as in
// `others` (the player's own component is ignored). Returned as profiles
// that differ from `others` only in that component.
std::vector<Profile> best_response(const PayoffTable& table, Player player, const Profile& others);
std::vector<Profile> best_response(const GameSpec& spec, Player player, const Profile& others);

// Pure Nash equilibria by exhaustive enumeration of the 18 profiles.
std::vector<Profile> solve_ne(const PayoffTable& table);
std::vector<Profile> solve_ne(const GameSpec& spec);
bool is_ne(const PayoffTable& table, const Profile& p);

// Sequential reading (Ar, then Ag, then AV) solved on an explicit game tree.
// Returns every equilibrium path reachable under some tie-breaking.
std::vector<Profile> backward_induction(const PayoffTable& table);

struct IncentiveReport {
  bool target_is_ne = false;  // (A, H, 2P)
  bool unique = false;        // and it is the only NE
  std::vector<Profile> equilibria;
  std::vector<std::string> issues;  // failing inequality or tie, one per line
};

IncentiveReport validate_incentive(const GameSpec& spec);

void write_report(std::ostream& out, const GameSpec& spec, const IncentiveReport& report);
// Header "s_Ar,s_Ag,s_AV,u_Ar,u_Ag,u_AV,is_ne" and one row per profile.
void write_profile_rows(std::ostream& out, const GameSpec& spec);

}  // namespace fdia::game
