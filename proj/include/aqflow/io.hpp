/*!
  \file io.hpp
  \brief Text parsers, JSON artifacts and SVG rendering.

  Netlist text:

      .model NAME
      .inputs a b c
      .outputs y
      AND t a b        # KIND out in1 [in2]
      OR y t c
      .end

  Library text: one block per cell,

      cell MAJ3
        inputs 3
        outputs 1
        size 60 70
        jj 6
        pin 10 0       # inputs first, then outputs
        ...
        function 11101000   # bit 7 first, or "splitter"
      end

  Config text: `key = value` lines, `#` starts a comment.
*/

#pragma once

#include <aqflow/layout.hpp>
#include <aqflow/majsynth.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace aqflow
{

using json = nlohmann::json;

netlist parse_netlist( std::string_view text );
/*! \brief AOI netlists only; other gate types have no keyword in the grammar. */
std::string write_netlist( netlist const& ntk );

cell_library parse_cell_library( std::string_view text );
std::string write_cell_library( cell_library const& lib );

/*! \brief Overlays `key = value` pairs on `base`; throws config_error on unknown keys or bad values. */
flow_config parse_config( std::string_view text, flow_config base = {} );
std::string write_config( flow_config const& cfg );
/*! \brief Sets one key; returns false if the key is unknown. */
bool set_config_value( flow_config& cfg, std::string_view key, std::string_view value );

std::string read_file( std::string const& path );
void write_file( std::string const& path, std::string const& content );

json netlist_to_json( netlist const& ntk );
netlist netlist_from_json( json const& j );

json placement_to_json( placement const& pl );
placement placement_from_json( json const& j );

json routes_to_json( route_db const& db );
route_db routes_from_json( json const& j );

json layout_to_json( layout const& lay );
layout layout_from_json( json const& j );

json drc_to_json( std::vector<drc_violation> const& violations );

json mapping_table_to_json( mapping_table const& table );

std::string write_layout_svg( layout const& lay );

/*! \brief Canonical text of a JSON document (2-space indent, sorted keys, trailing newline). */
std::string dump( json const& j );

} // namespace aqflow
