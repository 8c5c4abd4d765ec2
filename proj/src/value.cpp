#include "mucgf/value.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace mucgf::ir {

namespace {

constexpr uint64_t kCanonicalNan = 0x7ff8000000000000ULL;

uint64_t float_bits(double f) {
  uint64_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  if (std::isnan(f)) bits = kCanonicalNan;
  return bits;
}

double bits_to_float(uint64_t bits) {
  double f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

void put_u32(std::vector<uint8_t>& out, uint32_t x) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t x) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

struct Reader {
  const std::vector<uint8_t>& bytes;
  size_t pos = 0;

  uint8_t u8() {
    if (pos >= bytes.size()) throw std::runtime_error("truncated value encoding");
    return bytes[pos++];
  }
  uint32_t u32() {
    uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x = (x << 8) | u8();
    return x;
  }
  uint64_t u64() {
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = (x << 8) | u8();
    return x;
  }
};

bool float_eq_canonical(double a, double b) {
  return float_bits(a) == float_bits(b);
}

}  // namespace

std::string type_name(Type t) {
  switch (t) {
    case Type::Unit: return "unit";
    case Type::Bool: return "bool";
    case Type::Int: return "int";
    case Type::Float: return "float";
    case Type::IntArray: return "int[]";
    case Type::FloatArray: return "float[]";
  }
  return "?";
}

bool Value::operator==(const Value& other) const {
  if (tag_ != other.tag_) return false;
  switch (tag_) {
    case Type::Unit: return true;
    case Type::Bool: return b_ == other.b_;
    case Type::Int: return i_ == other.i_;
    case Type::Float: return float_eq_canonical(f_, other.f_);
    case Type::IntArray: return *ints_ == *other.ints_;
    case Type::FloatArray: {
      const auto& a = *floats_;
      const auto& b = *other.floats_;
      if (a.size() != b.size()) return false;
      for (size_t i = 0; i < a.size(); ++i)
        if (!float_eq_canonical(a[i], b[i])) return false;
      return true;
    }
  }
  return false;
}

std::string Value::to_string() const {
  std::ostringstream os;
  switch (tag_) {
    case Type::Unit: os << "unit"; break;
    case Type::Bool: os << (b_ ? "true" : "false"); break;
    case Type::Int: os << i_; break;
    case Type::Float: os << f_; break;
    case Type::IntArray: {
      os << "[";
      for (size_t i = 0; i < ints_->size(); ++i)
        os << (i ? "," : "") << (*ints_)[i];
      os << "]";
      break;
    }
    case Type::FloatArray: {
      os << "[";
      for (size_t i = 0; i < floats_->size(); ++i)
        os << (i ? "," : "") << (*floats_)[i];
      os << "]";
      break;
    }
  }
  return os.str();
}

std::vector<uint8_t> canonical_serialize(const std::vector<Value>& values) {
  std::vector<uint8_t> out;
  put_u32(out, static_cast<uint32_t>(values.size()));
  for (const auto& v : values) {
    switch (v.type()) {
      case Type::Unit:
        out.push_back(0x00);
        break;
      case Type::Int:
        out.push_back(0x01);
        put_u64(out, static_cast<uint64_t>(v.as_int()));
        break;
      case Type::Float:
        out.push_back(0x02);
        put_u64(out, float_bits(v.as_float()));
        break;
      case Type::Bool:
        out.push_back(0x03);
        out.push_back(v.as_bool() ? 1 : 0);
        break;
      case Type::IntArray: {
        out.push_back(0x04);
        put_u32(out, static_cast<uint32_t>(v.ints().size()));
        for (int64_t x : v.ints()) put_u64(out, static_cast<uint64_t>(x));
        break;
      }
      case Type::FloatArray: {
        out.push_back(0x05);
        put_u32(out, static_cast<uint32_t>(v.floats().size()));
        for (double x : v.floats()) put_u64(out, float_bits(x));
        break;
      }
    }
  }
  return out;
}

std::vector<Value> canonical_deserialize(const std::vector<uint8_t>& bytes) {
  Reader r{bytes};
  uint32_t count = r.u32();
  std::vector<Value> values;
  values.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint8_t tag = r.u8();
    switch (tag) {
      case 0x00:
        values.push_back(Value::unit());
        break;
      case 0x01:
        values.push_back(Value::integer(static_cast<int64_t>(r.u64())));
        break;
      case 0x02:
        values.push_back(Value::floating(bits_to_float(r.u64())));
        break;
      case 0x03:
        values.push_back(Value::boolean(r.u8() != 0));
        break;
      case 0x04: {
        uint32_t n = r.u32();
        std::vector<int64_t> xs(n);
        for (auto& x : xs) x = static_cast<int64_t>(r.u64());
        values.push_back(Value::int_array(std::move(xs)));
        break;
      }
      case 0x05: {
        uint32_t n = r.u32();
        std::vector<double> xs(n);
        for (auto& x : xs) x = bits_to_float(r.u64());
        values.push_back(Value::float_array(std::move(xs)));
        break;
      }
      default:
        throw std::runtime_error("unknown value tag");
    }
  }
  if (r.pos != bytes.size()) throw std::runtime_error("trailing bytes in value encoding");
  return values;
}

std::string crash_kind_name(CrashKind k) {
  switch (k) {
    case CrashKind::DivByZero: return "div_by_zero";
    case CrashKind::IndexOutOfBounds: return "index_out_of_bounds";
    case CrashKind::AssertionFailure: return "assertion_failure";
    case CrashKind::FuelExhausted: return "fuel_exhausted";
    case CrashKind::TypeFault: return "type_fault";
  }
  return "?";
}

std::optional<CrashKind> crash_kind_from_name(const std::string& name) {
  if (name == "div_by_zero") return CrashKind::DivByZero;
  if (name == "index_out_of_bounds") return CrashKind::IndexOutOfBounds;
  if (name == "assertion_failure") return CrashKind::AssertionFailure;
  if (name == "fuel_exhausted") return CrashKind::FuelExhausted;
  if (name == "type_fault") return CrashKind::TypeFault;
  return std::nullopt;
}

}  // namespace mucgf::ir
