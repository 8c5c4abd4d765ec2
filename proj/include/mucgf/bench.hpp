#pragma once

#include <string>
#include <vector>

#include "mucgf/ast.hpp"
#include "mucgf/interp.hpp"

namespace mucgf::bench {

// Byte-stream decoder, driven by a JSON spec: a list of sequential fields
// and a behavior mapping. Total over arbitrary bytes: missing bytes read
// as zero, lengths are reduced modulo a bound, floats are definitized and
// clamped.
struct DecoderField {
  enum class Kind : uint8_t { LenByte, Int, Float, IntArray, FloatArray, FloatPairs };
  Kind kind = Kind::Int;
  std::string name;        // binding produced
  std::string second_name; // FloatPairs: the second array
  uint32_t mod = 0;        // LenByte: value = byte % mod
  uint32_t width = 4;      // Int / IntArray element width in bytes (1..8)
  int64_t elem_mod = 0;    // IntArray: optional element reduction (0 = none)
  std::string len_ref;     // array fields: name of a LenByte binding
  uint32_t fixed_len = 0;  // array fields: fixed length when len_ref empty
  bool has_clamp = false;
  double clamp_lo = 0.0, clamp_hi = 0.0;
};

struct BehaviorSpec {
  std::string function;
  std::vector<std::string> args;  // field binding names
};

struct Decoder {
  std::vector<DecoderField> fields;
  std::vector<BehaviorSpec> behaviors;
};

Decoder decoder_from_json(const std::string& json_text);

struct BenchmarkCase {
  std::string name;
  std::string program_text;
  std::string decoder_json;
  ir::Program program;
  Decoder decoder;
};

// Deterministic, total decode of raw bytes into behavior invocations.
std::vector<ir::BehaviorInvocation> decode_input(const BenchmarkCase& c,
                                                 const std::vector<uint8_t>& bytes);

// {foo, c01_sorting, c02_matrix_inverse, c03_suffix_array, c04_regression,
//  c05_div}, each parsed and validated.
const std::vector<BenchmarkCase>& builtin_cases();

// Lookup by name among the builtins; nullptr when absent.
const BenchmarkCase* find_case(const std::string& name);

// User-supplied case: `<file>.ir` program + `<file>.decoder.json`.
BenchmarkCase load_case(const std::string& ir_path, const std::string& decoder_path);

}  // namespace mucgf::bench
