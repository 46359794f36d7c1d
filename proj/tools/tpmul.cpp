// tpmul: generate, simulate, verify, benchmark and export multiplier netlists.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

#include <tpmul/tpmul.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

using namespace tpmul;

struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct run_config
{
  std::string variant{ "recursive-bec-gated" };
  uint32_t width{ 16 };
  std::string policy{ "hpm-regular" };
  std::string mode{ "all" };
  uint64_t seed{ default_seed };
  uint64_t vectors{ 0 };
  std::string area_table_path;
  std::string delay_table_path;
  std::string out;
  std::string format{ "text" };
  std::string netlist;
  std::string designs{ "twin-regular,recursive-bec-gated" };
  std::string baseline;
  std::string vectors_file;
};

reduction_policy parse_policy( std::string const& name )
{
  auto p = policy_from_name( name );
  if ( !p )
  {
    throw usage_error( "unknown policy \"" + name + "\" (wallace, dadda, hpm-regular)" );
  }
  return *p;
}

circuit generate_design( std::string const& variant, uint32_t width, std::string const& policy )
{
  auto tag = variant_from_name( variant );
  if ( !tag )
  {
    throw usage_error( "unknown variant \"" + variant + "\" (hpm-plain, twin-regular, recursive-rca, recursive-bec-gated)" );
  }
  if ( !is_supported_width( width ) )
  {
    throw usage_error( "width must be a power of two >= 4 (and <= 64), got " + std::to_string( width ) );
  }
  return generate( { *tag, width, parse_policy( policy ) } );
}

circuit load_or_generate( run_config const& cfg )
{
  if ( !cfg.netlist.empty() )
  {
    return read_netlist( cfg.netlist );
  }
  return generate_design( cfg.variant, cfg.width, cfg.policy );
}

void emit( std::string const& path, std::string const& text )
{
  if ( path.empty() || path == "-" )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( path, std::ios::binary );
  if ( !out )
  {
    throw std::runtime_error( "cannot open " + path + " for writing" );
  }
  out << text;
}

std::vector<operation_mode> modes_of( circuit const& c )
{
  if ( c.find_port( "mode" ) != nullptr )
  {
    return { operation_mode::twin, operation_mode::only_m1, operation_mode::only_m4, operation_mode::full };
  }
  if ( c.find_port( "twin" ) != nullptr )
  {
    return { operation_mode::twin, operation_mode::full };
  }
  return { operation_mode::full };
}

std::vector<std::string> split_list( std::string const& text )
{
  std::vector<std::string> out;
  std::stringstream ss( text );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    if ( !item.empty() )
    {
      out.push_back( item );
    }
  }
  return out;
}

std::string gate_summary( circuit const& c )
{
  std::ostringstream os;
  os << c.name() << ": " << c.gates().size() << " gates, " << c.registers().size() << " register bits, " << c.num_nets() << " nets\n";
  auto hist = c.gate_histogram();
  for ( auto kind : all_gate_kinds )
  {
    if ( hist[static_cast<std::size_t>( kind )] != 0u )
    {
      os << "  " << kind_name( kind ) << " " << hist[static_cast<std::size_t>( kind )] << "\n";
    }
  }
  os << "  full adders " << c.meta_value( "counters.full" ).value_or( "0" ) << "\n";
  os << "  half adders " << c.meta_value( "counters.half" ).value_or( "0" ) << "\n";
  return os.str();
}

int cmd_gen( run_config const& cfg )
{
  auto c = generate_design( cfg.variant, cfg.width, cfg.policy );
  auto const path = cfg.out.empty() ? c.name() + ".json" : cfg.out;
  emit( path, serialize( c ) );
  ( path == "-" ? std::cerr : std::cout ) << gate_summary( c );
  return 0;
}

int cmd_sim( run_config const& cfg )
{
  auto c = load_or_generate( cfg );
  if ( cfg.vectors_file.empty() )
  {
    throw usage_error( "sim needs --vectors-file" );
  }
  std::ifstream in( cfg.vectors_file );
  if ( !in )
  {
    throw usage_error( "cannot open " + cfg.vectors_file );
  }
  auto vectors = read_vectors( in );
  auto result = run( c, vectors, true );
  std::ostringstream os;
  write_trace( os, vectors, result.trace );
  emit( cfg.out, os.str() );
  std::cerr << result.stats.cycles << " cycles, " << result.stats.total << " toggles, " << result.stats.weighted << " weighted\n";
  return 0;
}

int cmd_verify( run_config const& cfg )
{
  auto c = load_or_generate( cfg );
  auto supported = modes_of( c );
  std::vector<operation_mode> modes;
  if ( cfg.mode == "all" )
  {
    modes = supported;
  }
  else
  {
    auto m = mode_from_name( cfg.mode );
    if ( !m )
    {
      throw usage_error( "unknown mode \"" + cfg.mode + "\" (00, 01, 10, 11, twin, m1, m4, full, all)" );
    }
    if ( std::find( supported.begin(), supported.end(), *m ) == supported.end() )
    {
      throw usage_error( c.name() + " does not support mode " + std::string( mode_code( *m ) ) );
    }
    modes = { *m };
  }
  auto const strategy = c.width() <= 8u ? verify_strategy::all_pairs()
                                        : verify_strategy::random( cfg.seed, cfg.vectors != 0 ? cfg.vectors : default_vector_count( c.width() ) );

  nlohmann::ordered_json doc;
  doc["design"] = c.name();
  doc["strategy"] = strategy.exhaustive ? "exhaustive" : "random";
  if ( !strategy.exhaustive )
  {
    doc["seed"] = "0x" + to_hex( strategy.seed );
  }
  doc["modes"] = nlohmann::json::array();
  bool ok = true;
  for ( auto m : modes )
  {
    auto r = verify( c, m, strategy );
    ok = ok && r.ok() && r.merge_overflow_violations == 0 && r.increment_wrap_violations == 0 && r.twin_carry_violations == 0;
    std::cout << c.name() << " mode " << mode_code( m ) << ": " << r.passes << "/" << r.cases() << " pass";
    if ( r.headroom_monitored )
    {
      std::cout << ", overflow violations " << r.merge_overflow_violations << ", wrap violations " << r.increment_wrap_violations;
    }
    if ( r.twin_carry_monitored )
    {
      std::cout << ", twin carry violations " << r.twin_carry_violations;
    }
    std::cout << "\n";
    nlohmann::ordered_json entry;
    entry["mode"] = std::string( mode_code( m ) );
    entry["cases"] = r.cases();
    entry["passes"] = r.passes;
    entry["failures"] = r.failures;
    entry["merge_overflow_violations"] = r.merge_overflow_violations;
    entry["increment_wrap_violations"] = r.increment_wrap_violations;
    entry["twin_carry_violations"] = r.twin_carry_violations;
    if ( r.first_failure )
    {
      auto const& f = *r.first_failure;
      std::cout << "  first failure: x=0x" << to_hex( f.x ) << " y=0x" << to_hex( f.y ) << " expected=0x" << to_hex( f.expected )
                << " actual=0x" << to_hex( f.actual ) << "\n";
      entry["first_failure"] = { { "x", "0x" + to_hex( f.x ) }, { "y", "0x" + to_hex( f.y ) }, { "expected", "0x" + to_hex( f.expected ) },
                                 { "actual", "0x" + to_hex( f.actual ) } };
    }
    doc["modes"].push_back( entry );
  }
  doc["ok"] = ok;
  if ( !cfg.out.empty() )
  {
    emit( cfg.out, doc.dump( 2 ) + "\n" );
  }
  return ok ? 0 : 1;
}

int cmd_bench( run_config const& cfg )
{
  if ( !is_supported_width( cfg.width ) )
  {
    throw usage_error( "width must be a power of two >= 4 (and <= 64), got " + std::to_string( cfg.width ) );
  }
  auto names = split_list( cfg.designs );
  if ( names.empty() )
  {
    throw usage_error( "--designs lists no design" );
  }
  std::vector<circuit> designs;
  for ( auto const& name : names )
  {
    designs.push_back( generate_design( name, cfg.width, cfg.policy ) );
  }
  bench_config bc;
  bc.seed = cfg.seed;
  bc.vectors = cfg.vectors;
  if ( !cfg.area_table_path.empty() )
  {
    bc.area = read_area_table( cfg.area_table_path );
    bc.area_source = cfg.area_table_path;
  }
  if ( !cfg.delay_table_path.empty() )
  {
    bc.delay = read_delay_table( cfg.delay_table_path );
    bc.delay_source = cfg.delay_table_path;
  }
  auto report = compare( designs, cfg.baseline.empty() ? names.front() : cfg.baseline, bc );
  if ( cfg.format == "json" )
  {
    emit( cfg.out, to_json( report ).dump( 2 ) + "\n" );
  }
  else if ( cfg.format == "csv" )
  {
    emit( cfg.out, to_csv( report ) );
  }
  else
  {
    emit( cfg.out, to_text( report ) );
  }
  return 0;
}

int cmd_export( run_config const& cfg )
{
  auto c = load_or_generate( cfg );
  emit( cfg.out, export_verilog( c ) );
  return 0;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Twin-precision and recursive multiplier generator, simulator and bench" };
  app.require_subcommand( 1 );
  app.set_config( "--config", "", "TOML/INI file with default flag values" );
  run_config cfg;

  auto add_design = [&]( CLI::App* sub ) {
    sub->add_option( "--variant", cfg.variant, "hpm-plain | twin-regular | recursive-rca | recursive-bec-gated" )->capture_default_str();
    sub->add_option( "--width", cfg.width, "operand width N (power of two, 4..64)" )->capture_default_str();
    sub->add_option( "--policy", cfg.policy, "wallace | dadda | hpm-regular" )->capture_default_str();
  };
  auto add_netlist = [&]( CLI::App* sub ) { sub->add_option( "--netlist", cfg.netlist, "read this netlist document instead of generating" ); };

  auto* gen = app.add_subcommand( "gen", "write a netlist document and print its gate counts" );
  add_design( gen );
  gen->add_option( "--out", cfg.out, "output file ('-' for stdout); default <name>.json" );

  auto* sim = app.add_subcommand( "sim", "simulate a vector file and print the output trace" );
  add_design( sim );
  add_netlist( sim );
  sim->add_option( "--vectors-file", cfg.vectors_file, "text vectors, one cycle per line: port=hex ..." );
  sim->add_option( "--out", cfg.out, "trace file (default stdout)" );

  auto* ver = app.add_subcommand( "verify", "check p against the arithmetic model (exhaustive when N <= 8)" );
  add_design( ver );
  add_netlist( ver );
  ver->add_option( "--mode", cfg.mode, "00 | 01 | 10 | 11 | twin | m1 | m4 | full | all" )->capture_default_str();
  ver->add_option( "--seed", cfg.seed, "random-case seed" );
  ver->add_option( "--vectors", cfg.vectors, "random case count (default 10000 for N <= 16, else 15000)" );
  ver->add_option( "--out", cfg.out, "JSON verification report" );

  auto* bench = app.add_subcommand( "bench", "compare area, depth and toggle proxies per operation type" );
  add_design( bench );
  bench->add_option( "--designs", cfg.designs, "comma-separated variants" )->capture_default_str();
  bench->add_option( "--baseline", cfg.baseline, "variant the deltas refer to (default: first design)" );
  bench->add_option( "--seed", cfg.seed, "workload seed" );
  bench->add_option( "--vectors", cfg.vectors, "vectors per operation type (default 10000 for N <= 16, else 15000)" );
  bench->add_option( "--area-table", cfg.area_table_path, "JSON area table" );
  bench->add_option( "--delay-table", cfg.delay_table_path, "JSON delay table" );
  bench->add_option( "--format", cfg.format, "json | text | csv" )->check( CLI::IsMember( { "json", "text", "csv" } ) )->capture_default_str();
  bench->add_option( "--out", cfg.out, "report file (default stdout)" );

  auto* exp = app.add_subcommand( "export", "write flat structural Verilog" );
  add_design( exp );
  add_netlist( exp );
  exp->add_option( "--out", cfg.out, "HDL file (default stdout)" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return 2;
  }

  try
  {
    if ( gen->parsed() )
      return cmd_gen( cfg );
    if ( sim->parsed() )
      return cmd_sim( cfg );
    if ( ver->parsed() )
      return cmd_verify( cfg );
    if ( bench->parsed() )
      return cmd_bench( cfg );
    return cmd_export( cfg );
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
