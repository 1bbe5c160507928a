/*!
  \file balance.hpp
  \brief Splitter-tree and buffer insertion for gate-level pipelining.
*/

#pragma once

#include <aqflow/core.hpp>

#include <cstdint>
#include <optional>

namespace aqflow
{

struct splitter_stats
{
  std::size_t splitters{ 0 };
  std::size_t trees{ 0 };
  /*! largest tree depth in phases */
  int max_added_phases{ 0 };
};

/*!
  \brief Replaces every net with two or more consumers by a minimal-depth splitter tree.

  A primary output counts as one consumer. Trees use SPL2..SPLk of the
  library and pack children widest-first, so fanout 7 with k = 4 becomes
  SPL2 -> { SPL4, SPL3 }. Phases are left for `insert_buffers`.
*/
netlist insert_splitters( netlist const& ntk, cell_library const& lib, splitter_stats* stats = nullptr );

/*! \brief Shape of a minimal-depth tree: child counts per splitter in creation order. */
std::vector<int> splitter_tree_shape( std::size_t fanout, int k );

struct buffer_params
{
  /*! when set, edges are padded in a shuffled order (the result must not depend on it) */
  std::optional<std::uint64_t> shuffle_seed;
};

struct buffer_stats
{
  std::size_t buffers{ 0 };
  int depth{ 0 };
};

/*!
  \brief Assigns ASAP phases and pads every short edge with a buffer chain.

  Requires single-consumer nets. Afterwards every fanin driver sits at
  phase - 1 and all primary outputs are driven from phase depth - 1.
*/
netlist insert_buffers( netlist const& ntk, buffer_params const& ps = {}, buffer_stats* stats = nullptr );

/*! \brief ASAP phase of every gate (constants and input-only gates at 0). */
std::vector<int> asap_phases( netlist const& ntk );

} // namespace aqflow
