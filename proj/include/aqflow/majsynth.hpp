/*!
  \file majsynth.hpp
  \brief AOI to majority netlist conversion through three-input cuts.

  Truth tables are 8-bit with bit index `c b a`, where a, b, c are the cut
  leaves in ascending net-id order (a = 0xaa, b = 0xcc, c = 0xf0).
*/

#pragma once

#include <aqflow/core.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace aqflow
{

inline constexpr std::array<std::uint8_t, 3> leaf_tables{ 0xaa, 0xcc, 0xf0 };

enum class maj_source : std::uint8_t
{
  leaf0,
  leaf1,
  leaf2,
  const0,
  const1,
  level1_0,
  level1_1,
  level1_2
};

struct maj_input
{
  maj_source source{ maj_source::const0 };
  bool inverted{ false };

  friend bool operator==( maj_input const&, maj_input const& ) = default;
};

struct gate_config
{
  std::array<maj_input, 3> inputs;

  friend bool operator==( gate_config const&, gate_config const& ) = default;
};

enum class mapping_scheme
{
  one_level,
  two_level
};

struct mapping_cost
{
  std::uint32_t jj_count{ 0 };
  std::uint32_t levels{ 0 };

  friend auto operator<=>( mapping_cost const&, mapping_cost const& ) = default;
};

/*! \brief Operand of a realized cell: a cut leaf or an earlier cell. */
struct cell_operand
{
  bool is_leaf{ true };
  std::uint8_t index{ 0 };
};

struct cell_op
{
  gate_type type{ gate_type::buf };
  std::array<cell_operand, 3> in{};
};

/*! \brief Cells realizing a mapping; the last cell drives the root net. */
struct cell_program
{
  std::vector<cell_op> cells;
  /*! longest cell path from each leaf to the output, -1 if unused */
  std::array<int, 3> leaf_depth{ -1, -1, -1 };
  int levels{ 0 };
};

std::uint8_t evaluate_program( cell_program const& program );

struct maj_mapping
{
  mapping_scheme scheme{ mapping_scheme::one_level };
  /*! one-level: a single config; two-level: three first-level configs followed by the root */
  std::vector<gate_config> gates;
  std::uint8_t function{ 0 };
  mapping_cost cost;
  cell_program program;
};

/*! \brief JJ prices used when ranking mappings. */
struct mapping_costs
{
  int maj{ 6 };
  int and_or{ 6 };
  int inv{ 2 };
  int buf{ 2 };
  int constant{ 2 };

  static mapping_costs from_library( cell_library const& lib );
};

class mapping_table
{
public:
  std::optional<maj_mapping> const& one_level( std::uint8_t function ) const { return one_level_[function]; }
  std::optional<maj_mapping> const& two_level( std::uint8_t function ) const { return two_level_[function]; }

  /*! \brief Cheapest mapping of either scheme. */
  maj_mapping const* best( std::uint8_t function ) const;

  /*! \brief Number of functions reachable by at least one scheme. */
  std::size_t size() const;

  mapping_costs const& costs() const { return costs_; }

private:
  friend mapping_table build_mapping_table( mapping_costs const& costs );

  std::array<std::optional<maj_mapping>, 256> one_level_;
  std::array<std::optional<maj_mapping>, 256> two_level_;
  mapping_costs costs_;
};

/*! \brief Exhaustively enumerates one- and two-level MAJ3 configurations. */
mapping_table build_mapping_table( mapping_costs const& costs = {} );

/*! \brief Realizes a single MAJ3 configuration over the leaves. */
maj_mapping realize_one_level( gate_config const& config, mapping_costs const& costs = {} );

struct candidate_cut
{
  gate_id root{ invalid_id };
  std::array<net_id, 3> leaves{ invalid_id, invalid_id, invalid_id };
  std::uint8_t function{ 0 };
  /*! root first, then absorbed gates */
  std::vector<gate_id> cone;
};

/*!
  \brief Maximal three-leaf cut rooted at `root`.

  Leaves are expanded through gates whose every consumer already lies in
  the cone. Returns nothing when the closure has fewer or more than three
  leaves or when a leaf lies in the fanin cone of another.
*/
std::optional<candidate_cut> find_cut( netlist const& ntk, gate_id root, std::vector<bool> const& locked = {} );

std::vector<candidate_cut> enumerate_cuts( netlist const& ntk );

/*! \brief Mappings realizing the cut's function, cheapest first. */
std::vector<maj_mapping> match_majority( candidate_cut const& cut, mapping_table const& table );

struct convert_stats
{
  std::size_t cuts{ 0 };
  std::size_t accepted{ 0 };
  std::uint64_t initial_jj{ 0 };
  int initial_depth{ 0 };
  std::uint64_t final_jj{ 0 };
  int final_depth{ 0 };
};

/*!
  \brief Converts an AOI netlist into MAJ3/AND/OR/INV/BUF/CONST cells.

  Starts from the gate-by-gate realization and visits roots from outputs
  to inputs; a cut mapping is accepted when it does not increase
  (JJ count, depth). Gates absorbed by an accepted cut are locked.
*/
netlist convert_to_majority( netlist const& ntk, mapping_table const& table, convert_stats* stats = nullptr );

} // namespace aqflow
