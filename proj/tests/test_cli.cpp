#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>
#include <unistd.h>

#ifndef NDPOWER_CLI_PATH
#error "NDPOWER_CLI_PATH must point at the command line binary"
#endif
#ifndef NDPOWER_DATA_DIR
#error "NDPOWER_DATA_DIR must point at the fixture directory"
#endif

#include <sys/wait.h>

using json = nlohmann::json;

namespace
{

struct run_result
{
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp( const std::filesystem::path& p )
{
  std::ifstream in( p, std::ios::binary );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_file( const char* tag )
{
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         ( "ndpower_test_" + std::to_string( ::getpid() ) + "_" + tag + "_" +
           std::to_string( counter++ ) );
}

run_result run_cli( const std::string& args, const std::string& env = "" )
{
  const auto out_path = temp_file( "out" );
  const auto err_path = temp_file( "err" );
  std::string cmd;
  if ( !env.empty() )
  {
    cmd += "env " + env + " ";
  }
  cmd += std::string( NDPOWER_CLI_PATH ) + " " + args;
  cmd += " > " + out_path.string() + " 2> " + err_path.string();

  const int status = std::system( cmd.c_str() );
  run_result r;
  r.code = WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
  r.out = slurp( out_path );
  r.err = slurp( err_path );
  std::filesystem::remove( out_path );
  std::filesystem::remove( err_path );
  return r;
}

std::string data( const char* name )
{
  return std::string( NDPOWER_DATA_DIR ) + "/" + name;
}

const std::set<std::string> report_keys = { "command", "counterexample", "inputs",
                                            "oracle_checked", "outputs", "timing_ms" };

json parse_report( const run_result& r, const char* command )
{
  REQUIRE( r.code == 0 );
  const json report = json::parse( r.out );
  std::set<std::string> keys;
  for ( const auto& item : report.items() )
  {
    keys.insert( item.key() );
  }
  CHECK( keys == report_keys );
  CHECK( report["command"] == command );
  CHECK( report["timing_ms"].is_number() );
  CHECK( report["timing_ms"].get<double>() >= 0.0 );
  for ( const auto& item : report["inputs"].items() )
  {
    const std::string digest = item.value().get<std::string>();
    CHECK( digest.size() == 22u );
    CHECK( digest.rfind( "fnv1a:", 0u ) == 0u );
  }
  return report;
}

} // namespace

TEST_CASE( "classify prints the dichotomy verdict" )
{
  const auto full = run_cli( "classify --base " + data( "nand.base" ) );
  REQUIRE( full.code == 0 );
  CHECK( full.out.find( "verdict: FULL(and_or_not)" ) != std::string::npos );
  CHECK( full.out.find( "complete: yes" ) != std::string::npos );
  CHECK( full.out.find( "both-constants: yes" ) != std::string::npos );
  CHECK( full.out.find( "witness:" ) != std::string::npos );

  const auto mono = run_cli( "classify --base " + data( "and_or_const.base" ) );
  REQUIRE( mono.code == 0 );
  CHECK( mono.out.find( "verdict: LACKS(MONOTONE)" ) != std::string::npos );
  CHECK( mono.out.find( "complete: no" ) != std::string::npos );
  CHECK( mono.out.find( "both-constants: yes" ) != std::string::npos );
}

TEST_CASE( "classify run reports follow the schema" )
{
  const auto lacks = run_cli( "classify --json --base " + data( "d.base" ) );
  const json report = parse_report( lacks, "classify" );
  CHECK( report["counterexample"].is_null() );
  CHECK( !report["oracle_checked"].get<bool>() );
  CHECK( report["inputs"].size() == 1u );
  const auto& out = report["outputs"];
  CHECK( out["verdict"] == "lacks" );
  CHECK( out["reason"] == "self_dual" );
  CHECK( out["gadget"].is_null() );
  CHECK( out["witness"].is_null() );
  CHECK( !out["complete"].get<bool>() );
  CHECK( !out["has_both_constants"].get<bool>() );

  const auto full = run_cli( "classify --json --base " + data( "gadget_and.base" ) );
  const json freport = parse_report( full, "classify" );
  CHECK( freport["oracle_checked"].get<bool>() );
  const auto& fout = freport["outputs"];
  CHECK( fout["verdict"] == "full" );
  CHECK( fout["gadget"] == "and_or_not" );
  CHECK( fout["reason"].is_null() );
  CHECK( !fout["complete"].get<bool>() );
  CHECK( fout["witness"].is_string() );
  CHECK( fout["witness"].get<std::string>().find( "inputs n=3 m=0" ) == 0u );
}

TEST_CASE( "closure lists members in table order" )
{
  const auto r = run_cli( "closure --base " + data( "and.base" ) + " --arity 2" );
  REQUIRE( r.code == 0 );
  const std::string expected = "arity 0: 0 members\n"
                               "arity 1: 1 member\n"
                               "  01 cost 0\n"
                               "arity 2: 3 members\n"
                               "  0001 cost 1\n"
                               "  0101 cost 0\n"
                               "  0011 cost 0\n"
                               "total: 4\n";
  CHECK( r.out == expected );

  const auto j = run_cli( "closure --json --base " + data( "and.base" ) + " --arity 2" );
  const json report = parse_report( j, "closure" );
  CHECK( report["outputs"]["total"] == 4u );
  CHECK( report["outputs"]["reached_fixpoint"].get<bool>() );
  CHECK( report["outputs"]["members"].size() == 4u );
  CHECK( report["outputs"]["members"][0]["table"] == "01" );
}

TEST_CASE( "synthesize finds a witness or reports absence" )
{
  const auto hit = run_cli( "synthesize --base " + data( "nand.base" ) + " --target 10:1" );
  REQUIRE( hit.code == 0 );
  CHECK( hit.out.find( "cost: 1" ) != std::string::npos );
  CHECK( hit.out.find( "NAND t1 t1" ) != std::string::npos );

  const auto miss = run_cli( "synthesize --base " + data( "and.base" ) + " --target 0111:2" );
  REQUIRE( miss.code == 0 );
  CHECK( miss.out == "not a member\n" );

  const auto jmiss =
      run_cli( "synthesize --json --base " + data( "and.base" ) + " --target 0111:2" );
  const json report = parse_report( jmiss, "synthesize" );
  CHECK( !report["outputs"]["member"].get<bool>() );
  CHECK( report["outputs"]["witness"].is_null() );
  CHECK( report["outputs"]["cost"].is_null() );

  const auto bad = run_cli( "synthesize --base " + data( "and.base" ) + " --target 0111" );
  CHECK( bad.code == 2 );
}

TEST_CASE( "determinize picks the determinizer from the base" )
{
  const auto sd = run_cli( "determinize --json --base " + data( "d.base" ) + " --circuit " +
                           data( "d_notx.ckt" ) );
  const json report = parse_report( sd, "determinize" );
  CHECK( report["outputs"]["mode"] == "selfdual" );
  CHECK( report["outputs"]["gates"] == 1u );
  CHECK( report["oracle_checked"].get<bool>() );
  CHECK( report["outputs"]["netlist"].is_string() );

  const auto lin = run_cli( "determinize --base " + data( "xor1.base" ) + " --circuit " +
                            data( "xor_chain.ckt" ) );
  REQUIRE( lin.code == 0 );
  CHECK( lin.out.find( "mode: linear" ) != std::string::npos );

  /* mixed base: no determinizer applies */
  const auto bad = run_cli( "determinize --base " + data( "and_or_not.base" ) + " --circuit " +
                            data( "or_via_nots.ckt" ) );
  CHECK( bad.code == 3 );
  CHECK( bad.err.find( "error:" ) != std::string::npos );

  /* forcing an inapplicable mode is also a precondition failure */
  const auto forced = run_cli( "determinize --mode monotone --base " + data( "d.base" ) +
                               " --circuit " + data( "d_notx.ckt" ) );
  CHECK( forced.code == 3 );
}

TEST_CASE( "lift pads constants away" )
{
  const auto r = run_cli( "lift --json --gadget and --base " + data( "gadget_and.base" ) +
                          " --circuit " + data( "gadget_const.ckt" ) );
  const json report = parse_report( r, "lift" );
  CHECK( report["outputs"]["gadget"] == "and" );
  CHECK( report["outputs"]["gates"] == 3u );
  CHECK( report["outputs"]["num_inputs"] == 3u );
  CHECK( report["oracle_checked"].get<bool>() );
  const std::string netlist = report["outputs"]["netlist"].get<std::string>();
  CHECK( netlist.find( "const" ) == std::string::npos );
}

TEST_CASE( "noteliminate rewrites and optionally compiles onto a target base" )
{
  const auto plain = run_cli( "noteliminate --json --circuit " + data( "or_via_nots.ckt" ) );
  const json report = parse_report( plain, "noteliminate" );
  CHECK( report["outputs"]["polarity"] == 1 );
  CHECK( report["outputs"]["gates"] == 5u );
  CHECK( !report["outputs"]["compiled_to_target"].get<bool>() );
  CHECK( report["oracle_checked"].get<bool>() );

  const auto compiled = run_cli( "noteliminate --json --circuit " + data( "and_via_nots.ckt" ) +
                                 " --target-base " + data( "gadget_and.base" ) );
  const json creport = parse_report( compiled, "noteliminate" );
  CHECK( creport["outputs"]["compiled_to_target"].get<bool>() );
  const std::string netlist = creport["outputs"]["netlist"].get<std::string>();
  CHECK( netlist.find( "NOT" ) == std::string::npos );
  CHECK( netlist.find( "const" ) == std::string::npos );
  CHECK( netlist.find( "G " ) != std::string::npos );

  /* OR accepts inputs with x1 = 0, so the disjunctive pipeline applies but
   * the conjunctive target compilation does not */
  const auto rejected = run_cli( "noteliminate --circuit " + data( "or_via_nots.ckt" ) +
                                 " --target-base " + data( "gadget_and.base" ) );
  CHECK( rejected.code == 3 );
  CHECK( rejected.err.find( "separating" ) != std::string::npos );

  const auto dual = run_cli( "noteliminate --polarity 0 --json --circuit " +
                             data( "and_via_nots.ckt" ) );
  const json dreport = parse_report( dual, "noteliminate" );
  CHECK( dreport["outputs"]["polarity"] == 0 );
}

TEST_CASE( "eval prints values and tables" )
{
  const auto v1 = run_cli( "eval --semantics nondet --input 1 --base " + data( "and.base" ) +
                           " --circuit " + data( "x1_and_y1.ckt" ) );
  REQUIRE( v1.code == 0 );
  CHECK( v1.out == "1\n" );

  const auto v0 = run_cli( "eval --semantics nondet --input 0 --base " + data( "and.base" ) +
                           " --circuit " + data( "x1_and_y1.ckt" ) );
  REQUIRE( v0.code == 0 );
  CHECK( v0.out == "0\n" );

  const auto table = run_cli( "eval --semantics det --base " + data( "and.base" ) +
                              " --circuit " + data( "x1_and_y1.ckt" ) );
  REQUIRE( table.code == 0 );
  CHECK( table.out == "arity: 2\ntable: 8\n" );

  const auto jt = run_cli( "eval --json --semantics nondet --base " + data( "and.base" ) +
                           " --circuit " + data( "x1_and_y1.ckt" ) );
  const json report = parse_report( jt, "eval" );
  CHECK( report["outputs"]["arity"] == 1u );
  CHECK( report["outputs"]["table"] == "01" );
  CHECK( report["outputs"]["table_hex"] == "2" );

  /* deterministic single-point evaluation requires m = 0 */
  const auto needs_m0 = run_cli( "eval --semantics det --input 1 --base " + data( "and.base" ) +
                                 " --circuit " + data( "x1_and_y1.ckt" ) );
  CHECK( needs_m0.code == 3 );

  const auto short_input = run_cli( "eval --semantics nondet --input 11 --base " +
                                    data( "and.base" ) + " --circuit " + data( "x1_and_y1.ckt" ) );
  CHECK( short_input.code == 2 );

  const auto bad_chars = run_cli( "eval --semantics nondet --input x --base " + data( "and.base" ) +
                                  " --circuit " + data( "x1_and_y1.ckt" ) );
  CHECK( bad_chars.code == 2 );
}

TEST_CASE( "equiv compares across bases and semantics" )
{
  const auto ne = run_cli( "equiv --base " + data( "and_or_not.base" ) + " --circuit " +
                           data( "or_via_nots.ckt" ) + " --circuit2 " + data( "and_via_nots.ckt" ) );
  REQUIRE( ne.code == 0 );
  CHECK( ne.out == "differ at 10\n" );

  const auto eq = run_cli( "equiv --base " + data( "and_or_not.base" ) + " --circuit " +
                           data( "or_via_nots.ckt" ) + " --circuit2 " + data( "or_via_nots.ckt" ) );
  REQUIRE( eq.code == 0 );
  CHECK( eq.out == "equal\n" );

  /* the existential function of x1 AND y1 is x1 itself */
  const auto across = run_cli( "equiv --semantics nondet --base " + data( "and.base" ) +
                               " --circuit " + data( "x1_and_y1.ckt" ) + " --semantics2 det" +
                               " --base2 " + data( "and.base" ) + " --circuit2 " +
                               data( "x1.ckt" ) );
  REQUIRE( across.code == 0 );
  CHECK( across.out == "equal\n" );

  const auto j = run_cli( "equiv --json --base " + data( "and_or_not.base" ) + " --circuit " +
                          data( "or_via_nots.ckt" ) + " --circuit2 " + data( "and_via_nots.ckt" ) );
  const json report = parse_report( j, "equiv" );
  CHECK( !report["outputs"]["equal"].get<bool>() );
  CHECK( report["counterexample"] == "10" );
  CHECK( report["oracle_checked"].get<bool>() );
}

TEST_CASE( "usage problems exit with the argument error code" )
{
  CHECK( run_cli( "classify" ).code == 2 );
  CHECK( run_cli( "frobnicate --base x" ).code == 2 );
  CHECK( run_cli( "classify --base /nonexistent/no.base" ).code == 2 );
  CHECK( run_cli( "determinize --mode bogus --base " + data( "d.base" ) + " --circuit " +
                  data( "d_notx.ckt" ) )
             .code == 2 );
  CHECK( run_cli( "--help" ).code == 0 );
}

TEST_CASE( "the exhaustive bound is configurable from the environment" )
{
  const auto blocked = run_cli( "eval --semantics det --base " + data( "and.base" ) +
                                " --circuit " + data( "x1_and_y1.ckt" ),
                                "NDPOWER_EXHAUSTIVE_BOUND=1" );
  CHECK( blocked.code == 3 );

  const auto fine = run_cli( "eval --semantics det --base " + data( "and.base" ) + " --circuit " +
                             data( "x1_and_y1.ckt" ),
                             "NDPOWER_EXHAUSTIVE_BOUND=2" );
  CHECK( fine.code == 0 );

  const auto garbage = run_cli( "classify --base " + data( "nand.base" ),
                                "NDPOWER_EXHAUSTIVE_BOUND=banana" );
  CHECK( garbage.code == 2 );
}

TEST_CASE( "--out writes the produced netlist to a file" )
{
  const auto path = temp_file( "netlist" );
  const auto r = run_cli( "determinize --json --base " + data( "d.base" ) + " --circuit " +
                          data( "d_notx.ckt" ) + " --out " + path.string() );
  const json report = parse_report( r, "determinize" );
  const std::string written = slurp( path );
  std::filesystem::remove( path );
  CHECK( written == report["outputs"]["netlist"].get<std::string>() );
  CHECK( written.rfind( "inputs n=1 m=0", 0u ) == 0u );
}
