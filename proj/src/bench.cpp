#include "mucgf/bench.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mucgf::bench {

namespace {

// --- embedded IR programs ---

const char* kFooProgram = R"(
fn foo(x: int, y: int) -> int {
  if (x > y) {
    return x;
  } else {
    return x;
  }
}
)";

const char* kSortingProgram = R"(
fn is_sorted(a: int[]) -> bool {
  let i: int = 1;
  while (i < len(a)) {
    if (a[i - 1] > a[i]) {
      return false;
    }
    i = i + 1;
  }
  return true;
}

fn min_index(a: int[], from: int) -> int {
  let best: int = from;
  let i: int = from + 1;
  while (i < len(a)) {
    if (a[i] < a[best]) {
      best = i;
    }
    i = i + 1;
  }
  return best;
}

fn sort(a: int[]) -> int[] {
  let n: int = len(a);
  if (n < 2) {
    return a;
  }
  if (is_sorted(a)) {
    return a;
  }
  let i: int = 0;
  while (i < n - 1) {
    let m: int = min_index(a, i);
    if (m != i) {
      let tmp: int = a[i];
      a[i] = a[m];
      a[m] = tmp;
    }
    i = i + 1;
  }
  return a;
}
)";

const char* kMatrixProgram = R"(
fn absf(x: float) -> float {
  if (x < 0.0) {
    return -x;
  }
  return x;
}

fn determinant(m: float[]) -> float {
  let a: float[] = float_array(16);
  let i: int = 0;
  while (i < 16) {
    a[i] = m[i];
    i = i + 1;
  }
  let det: float = 1.0;
  let col: int = 0;
  while (col < 4) {
    let piv: int = col;
    let r: int = col + 1;
    while (r < 4) {
      if (absf(a[r * 4 + col]) > absf(a[piv * 4 + col])) {
        piv = r;
      }
      r = r + 1;
    }
    if (piv != col) {
      let c: int = 0;
      while (c < 4) {
        let tmp: float = a[col * 4 + c];
        a[col * 4 + c] = a[piv * 4 + c];
        a[piv * 4 + c] = tmp;
        c = c + 1;
      }
      det = -det;
    }
    let p: float = a[col * 4 + col];
    if (p == 0.0) {
      return 0.0;
    }
    det = det * p;
    r = col + 1;
    while (r < 4) {
      let f: float = a[r * 4 + col] / p;
      let c2: int = col;
      while (c2 < 4) {
        a[r * 4 + c2] = a[r * 4 + c2] - f * a[col * 4 + c2];
        c2 = c2 + 1;
      }
      r = r + 1;
    }
    col = col + 1;
  }
  return det;
}

fn inverse(m: float[]) -> float[] {
  let a: float[] = float_array(16);
  let inv: float[] = float_array(16);
  let i: int = 0;
  while (i < 16) {
    a[i] = m[i];
    i = i + 1;
  }
  i = 0;
  while (i < 4) {
    inv[i * 4 + i] = 1.0;
    i = i + 1;
  }
  let col: int = 0;
  while (col < 4) {
    let piv: int = col;
    let r: int = col + 1;
    while (r < 4) {
      if (absf(a[r * 4 + col]) > absf(a[piv * 4 + col])) {
        piv = r;
      }
      r = r + 1;
    }
    if (piv != col) {
      let c: int = 0;
      while (c < 4) {
        let t1: float = a[col * 4 + c];
        a[col * 4 + c] = a[piv * 4 + c];
        a[piv * 4 + c] = t1;
        let t2: float = inv[col * 4 + c];
        inv[col * 4 + c] = inv[piv * 4 + c];
        inv[piv * 4 + c] = t2;
        c = c + 1;
      }
    }
    let p: float = a[col * 4 + col];
    let c2: int = 0;
    while (c2 < 4) {
      a[col * 4 + c2] = a[col * 4 + c2] / p;
      inv[col * 4 + c2] = inv[col * 4 + c2] / p;
      c2 = c2 + 1;
    }
    let r2: int = 0;
    while (r2 < 4) {
      if (r2 != col) {
        let f: float = a[r2 * 4 + col];
        let c3: int = 0;
        while (c3 < 4) {
          a[r2 * 4 + c3] = a[r2 * 4 + c3] - f * a[col * 4 + c3];
          inv[r2 * 4 + c3] = inv[r2 * 4 + c3] - f * inv[col * 4 + c3];
          c3 = c3 + 1;
        }
      }
      r2 = r2 + 1;
    }
    col = col + 1;
  }
  return inv;
}
)";

const char* kSuffixProgram = R"(
fn suffix_less(t: int[], i: int, j: int) -> bool {
  let n: int = len(t);
  while (i < n && j < n) {
    if (t[i] < t[j]) {
      return true;
    }
    if (t[i] > t[j]) {
      return false;
    }
    i = i + 1;
    j = j + 1;
  }
  return i == n && j < n;
}

fn suffix_array(t: int[]) -> int[] {
  let n: int = len(t);
  let sa: int[] = int_array(n);
  let i: int = 0;
  while (i < n) {
    sa[i] = i;
    i = i + 1;
  }
  let a: int = 0;
  while (a < n) {
    let best: int = a;
    let b: int = a + 1;
    while (b < n) {
      if (suffix_less(t, sa[b], sa[best])) {
        best = b;
      }
      b = b + 1;
    }
    if (best != a) {
      let tmp: int = sa[a];
      sa[a] = sa[best];
      sa[best] = tmp;
    }
    a = a + 1;
  }
  return sa;
}
)";

const char* kRegressionProgram = R"(
fn slope(xs: float[], ys: float[]) -> float {
  let n: int = len(xs);
  let sx: float = 0.0;
  let sy: float = 0.0;
  let sxx: float = 0.0;
  let sxy: float = 0.0;
  let i: int = 0;
  while (i < n) {
    sx = sx + xs[i];
    sy = sy + ys[i];
    sxx = sxx + xs[i] * xs[i];
    sxy = sxy + xs[i] * ys[i];
    i = i + 1;
  }
  let cnt: float = to_float(n);
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

fn intercept(xs: float[], ys: float[]) -> float {
  let n: int = len(xs);
  let sx: float = 0.0;
  let sy: float = 0.0;
  let i: int = 0;
  while (i < n) {
    sx = sx + xs[i];
    sy = sy + ys[i];
    i = i + 1;
  }
  let cnt: float = to_float(n);
  return (sy - slope(xs, ys) * sx) / cnt;
}
)";

const char* kDivProgram = R"(
fn gcd(a: int, b: int) -> int {
  if (a < 0) {
    a = -a;
  }
  if (b < 0) {
    b = -b;
  }
  while (b != 0) {
    let t: int = b;
    b = a % b;
    a = t;
  }
  return a;
}

fn fraction_divide(an: int, ad: int, bn: int, bd: int) -> int[] {
  let num: int = an * bd;
  let den: int = ad * bn;
  let g: int = gcd(num, den);
  num = num / g;
  den = den / g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  let out: int[] = int_array(2);
  out[0] = num;
  out[1] = den;
  return out;
}
)";

// --- decoder specs ---

const char* kFooDecoder = R"({
  "fields": [
    {"name": "x", "kind": "int", "width": 4},
    {"name": "y", "kind": "int", "width": 4}
  ],
  "behaviors": [{"function": "foo", "args": ["x", "y"]}]
})";

const char* kSortingDecoder = R"({
  "fields": [
    {"name": "n", "kind": "len_byte", "mod": 17},
    {"name": "a", "kind": "int_array", "len": "n", "width": 4}
  ],
  "behaviors": [{"function": "sort", "args": ["a"]}]
})";

const char* kMatrixDecoder = R"({
  "fields": [
    {"name": "m", "kind": "float_array", "fixed_len": 16, "clamp": [-1000.0, 1000.0]}
  ],
  "behaviors": [
    {"function": "inverse", "args": ["m"]},
    {"function": "determinant", "args": ["m"]}
  ]
})";

const char* kSuffixDecoder = R"({
  "fields": [
    {"name": "n", "kind": "len_byte", "mod": 33},
    {"name": "t", "kind": "int_array", "len": "n", "width": 1, "elem_mod": 4}
  ],
  "behaviors": [{"function": "suffix_array", "args": ["t"]}]
})";

const char* kRegressionDecoder = R"({
  "fields": [
    {"name": "n", "kind": "len_byte", "mod": 33},
    {"name": "xs", "kind": "float_pairs", "second": "ys", "len": "n",
     "clamp": [-1000000.0, 1000000.0]}
  ],
  "behaviors": [
    {"function": "slope", "args": ["xs", "ys"]},
    {"function": "intercept", "args": ["xs", "ys"]}
  ]
})";

const char* kDivDecoder = R"({
  "fields": [
    {"name": "an", "kind": "int", "width": 4},
    {"name": "ad", "kind": "int", "width": 4},
    {"name": "bn", "kind": "int", "width": 4},
    {"name": "bd", "kind": "int", "width": 4}
  ],
  "behaviors": [{"function": "fraction_divide", "args": ["an", "ad", "bn", "bd"]}]
})";

// Byte cursor that zero-fills past the end.
struct Cursor {
  const std::vector<uint8_t>& bytes;
  size_t pos = 0;

  uint8_t u8() { return pos < bytes.size() ? bytes[pos++] : (++pos, 0); }

  int64_t signed_be(uint32_t width) {
    uint64_t raw = 0;
    for (uint32_t i = 0; i < width; ++i) raw = (raw << 8) | u8();
    // Sign-extend from width bytes.
    if (width < 8) {
      uint64_t sign_bit = 1ULL << (width * 8 - 1);
      if (raw & sign_bit) raw |= ~((sign_bit << 1) - 1);
    }
    return static_cast<int64_t>(raw);
  }

  double float_be(const DecoderField& f) {
    uint64_t raw = 0;
    for (int i = 0; i < 8; ++i) raw = (raw << 8) | u8();
    double d;
    std::memcpy(&d, &raw, sizeof(d));
    if (!std::isfinite(d)) d = 0.0;
    if (f.has_clamp) {
      if (d < f.clamp_lo) d = f.clamp_lo;
      if (d > f.clamp_hi) d = f.clamp_hi;
    }
    return d;
  }
};

DecoderField::Kind field_kind_from_name(const std::string& name) {
  using Kind = DecoderField::Kind;
  if (name == "len_byte") return Kind::LenByte;
  if (name == "int") return Kind::Int;
  if (name == "float") return Kind::Float;
  if (name == "int_array") return Kind::IntArray;
  if (name == "float_array") return Kind::FloatArray;
  if (name == "float_pairs") return Kind::FloatPairs;
  throw std::runtime_error("decoder: unknown field kind '" + name + "'");
}

}  // namespace

Decoder decoder_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Decoder d;
  for (const auto& fj : j.at("fields")) {
    DecoderField f;
    f.name = fj.at("name").get<std::string>();
    f.kind = field_kind_from_name(fj.at("kind").get<std::string>());
    if (fj.contains("second")) f.second_name = fj["second"].get<std::string>();
    if (fj.contains("mod")) f.mod = fj["mod"].get<uint32_t>();
    if (fj.contains("width")) f.width = fj["width"].get<uint32_t>();
    if (fj.contains("elem_mod")) f.elem_mod = fj["elem_mod"].get<int64_t>();
    if (fj.contains("len")) f.len_ref = fj["len"].get<std::string>();
    if (fj.contains("fixed_len")) f.fixed_len = fj["fixed_len"].get<uint32_t>();
    if (fj.contains("clamp")) {
      f.has_clamp = true;
      f.clamp_lo = fj["clamp"][0].get<double>();
      f.clamp_hi = fj["clamp"][1].get<double>();
    }
    if (f.kind == DecoderField::Kind::LenByte && f.mod == 0)
      throw std::runtime_error("decoder: len_byte requires a nonzero mod");
    if (f.width < 1 || f.width > 8)
      throw std::runtime_error("decoder: field width out of range");
    d.fields.push_back(std::move(f));
  }
  for (const auto& bj : j.at("behaviors")) {
    BehaviorSpec b;
    b.function = bj.at("function").get<std::string>();
    for (const auto& a : bj.at("args")) b.args.push_back(a.get<std::string>());
    d.behaviors.push_back(std::move(b));
  }
  return d;
}

std::vector<ir::BehaviorInvocation> decode_input(const BenchmarkCase& c,
                                                 const std::vector<uint8_t>& bytes) {
  Cursor cur{bytes};
  std::unordered_map<std::string, ir::Value> bindings;
  std::unordered_map<std::string, uint32_t> lengths;

  auto array_len = [&](const DecoderField& f) -> uint32_t {
    if (!f.len_ref.empty()) {
      auto it = lengths.find(f.len_ref);
      if (it == lengths.end())
        throw std::runtime_error("decoder: unknown length binding '" + f.len_ref + "'");
      return it->second;
    }
    return f.fixed_len;
  };

  for (const auto& f : c.decoder.fields) {
    switch (f.kind) {
      case DecoderField::Kind::LenByte: {
        uint32_t n = cur.u8() % f.mod;
        lengths[f.name] = n;
        break;
      }
      case DecoderField::Kind::Int:
        bindings[f.name] = ir::Value::integer(cur.signed_be(f.width));
        break;
      case DecoderField::Kind::Float:
        bindings[f.name] = ir::Value::floating(cur.float_be(f));
        break;
      case DecoderField::Kind::IntArray: {
        uint32_t n = array_len(f);
        std::vector<int64_t> xs(n);
        for (auto& x : xs) {
          x = cur.signed_be(f.width);
          if (f.elem_mod > 0) x = ((x % f.elem_mod) + f.elem_mod) % f.elem_mod;
        }
        bindings[f.name] = ir::Value::int_array(std::move(xs));
        break;
      }
      case DecoderField::Kind::FloatArray: {
        uint32_t n = array_len(f);
        std::vector<double> xs(n);
        for (auto& x : xs) x = cur.float_be(f);
        bindings[f.name] = ir::Value::float_array(std::move(xs));
        break;
      }
      case DecoderField::Kind::FloatPairs: {
        uint32_t n = array_len(f);
        std::vector<double> xs(n), ys(n);
        for (uint32_t i = 0; i < n; ++i) {
          xs[i] = cur.float_be(f);
          ys[i] = cur.float_be(f);
        }
        bindings[f.name] = ir::Value::float_array(std::move(xs));
        bindings[f.second_name] = ir::Value::float_array(std::move(ys));
        break;
      }
    }
  }

  std::vector<ir::BehaviorInvocation> invocations;
  for (const auto& b : c.decoder.behaviors) {
    ir::BehaviorInvocation inv;
    inv.function = b.function;
    for (const auto& arg : b.args) {
      auto it = bindings.find(arg);
      if (it == bindings.end())
        throw std::runtime_error("decoder: unknown binding '" + arg + "'");
      inv.args.push_back(it->second);
    }
    invocations.push_back(std::move(inv));
  }
  return invocations;
}

namespace {

BenchmarkCase make_case(std::string name, const char* program_text,
                        const char* decoder_json) {
  BenchmarkCase c;
  c.name = std::move(name);
  c.program_text = program_text;
  c.decoder_json = decoder_json;
  c.program = ir::parse_program(c.program_text);
  c.decoder = decoder_from_json(c.decoder_json);
  return c;
}

}  // namespace

const std::vector<BenchmarkCase>& builtin_cases() {
  static const std::vector<BenchmarkCase> cases = [] {
    std::vector<BenchmarkCase> cs;
    cs.push_back(make_case("foo", kFooProgram, kFooDecoder));
    cs.push_back(make_case("c01_sorting", kSortingProgram, kSortingDecoder));
    cs.push_back(make_case("c02_matrix_inverse", kMatrixProgram, kMatrixDecoder));
    cs.push_back(make_case("c03_suffix_array", kSuffixProgram, kSuffixDecoder));
    cs.push_back(make_case("c04_regression", kRegressionProgram, kRegressionDecoder));
    cs.push_back(make_case("c05_div", kDivProgram, kDivDecoder));
    return cs;
  }();
  return cases;
}

const BenchmarkCase* find_case(const std::string& name) {
  for (const auto& c : builtin_cases())
    if (c.name == name) return &c;
  return nullptr;
}

BenchmarkCase load_case(const std::string& ir_path, const std::string& decoder_path) {
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  BenchmarkCase c;
  c.name = ir_path;
  c.program_text = slurp(ir_path);
  c.decoder_json = slurp(decoder_path);
  c.program = ir::parse_program(c.program_text);
  c.decoder = decoder_from_json(c.decoder_json);
  return c;
}

}  // namespace mucgf::bench
