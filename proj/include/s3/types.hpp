#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace s3 {

// Link rates are kept as integral kbit/s so capacity bookkeeping stays exact
// under arbitrary allocate/release sequences.
using Kbps = std::int64_t;

inline constexpr double kSpeedOfLightKmPerS = 299792.458;

inline Kbps mbps_to_kbps(double mbps) {
  return static_cast<Kbps>(std::llround(mbps * 1000.0));
}

inline double kbps_to_mbps(Kbps kbps) {
  return static_cast<double>(kbps) / 1000.0;
}

// ---------------------------------------------------------------------------
// Domain enums
// ---------------------------------------------------------------------------

enum class SliceMode { Integrated, Standalone };

enum class ServiceClass { Embb, Urllc, Mmtc, Custom };

enum class IsolationClass { Soft, Hard };

enum class TenantControl { Managed, SharedControl, FullControl };

enum class OrbitClass { Leo, Meo, Geo };

enum class OrbitPreference { Leo, Meo, Geo, Any };

inline std::string_view to_string(SliceMode m) {
  return m == SliceMode::Integrated ? "Integrated" : "Standalone";
}

inline std::string_view to_string(ServiceClass c) {
  switch (c) {
    case ServiceClass::Embb: return "eMBB";
    case ServiceClass::Urllc: return "URLLC";
    case ServiceClass::Mmtc: return "mMTC";
    case ServiceClass::Custom: return "Custom";
  }
  return "Custom";
}

inline std::string_view to_string(IsolationClass i) {
  return i == IsolationClass::Hard ? "Hard" : "Soft";
}

inline std::string_view to_string(TenantControl t) {
  switch (t) {
    case TenantControl::Managed: return "Managed";
    case TenantControl::SharedControl: return "SharedControl";
    case TenantControl::FullControl: return "FullControl";
  }
  return "Managed";
}

inline std::string_view to_string(OrbitClass o) {
  switch (o) {
    case OrbitClass::Leo: return "LEO";
    case OrbitClass::Meo: return "MEO";
    case OrbitClass::Geo: return "GEO";
  }
  return "GEO";
}

inline std::string_view to_string(OrbitPreference o) {
  switch (o) {
    case OrbitPreference::Leo: return "LEO";
    case OrbitPreference::Meo: return "MEO";
    case OrbitPreference::Geo: return "GEO";
    case OrbitPreference::Any: return "Any";
  }
  return "Any";
}

template <typename E>
std::optional<E> enum_from_string(std::string_view);

template <>
inline std::optional<SliceMode> enum_from_string<SliceMode>(std::string_view s) {
  if (s == "Integrated") return SliceMode::Integrated;
  if (s == "Standalone") return SliceMode::Standalone;
  return std::nullopt;
}

template <>
inline std::optional<ServiceClass> enum_from_string<ServiceClass>(std::string_view s) {
  if (s == "eMBB" || s == "EMBB") return ServiceClass::Embb;
  if (s == "URLLC") return ServiceClass::Urllc;
  if (s == "mMTC" || s == "MMTC") return ServiceClass::Mmtc;
  if (s == "Custom") return ServiceClass::Custom;
  return std::nullopt;
}

template <>
inline std::optional<IsolationClass> enum_from_string<IsolationClass>(std::string_view s) {
  if (s == "Soft") return IsolationClass::Soft;
  if (s == "Hard") return IsolationClass::Hard;
  return std::nullopt;
}

template <>
inline std::optional<TenantControl> enum_from_string<TenantControl>(std::string_view s) {
  if (s == "Managed") return TenantControl::Managed;
  if (s == "SharedControl") return TenantControl::SharedControl;
  if (s == "FullControl") return TenantControl::FullControl;
  return std::nullopt;
}

template <>
inline std::optional<OrbitClass> enum_from_string<OrbitClass>(std::string_view s) {
  if (s == "LEO") return OrbitClass::Leo;
  if (s == "MEO") return OrbitClass::Meo;
  if (s == "GEO") return OrbitClass::Geo;
  return std::nullopt;
}

template <>
inline std::optional<OrbitPreference> enum_from_string<OrbitPreference>(std::string_view s) {
  if (s == "LEO") return OrbitPreference::Leo;
  if (s == "MEO") return OrbitPreference::Meo;
  if (s == "GEO") return OrbitPreference::Geo;
  if (s == "Any") return OrbitPreference::Any;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Error / Result
// ---------------------------------------------------------------------------

/// Machine-readable failure: `code` is the stable identifier asserted by
/// callers and tests, `message` is for humans, `details` carries extras
/// such as missing capability tags.
struct Error {
  std::string code;
  std::string message;
  std::vector<std::string> details;

  bool operator==(const Error&) const = default;
};

struct Ok {
  bool operator==(const Ok&) const = default;
};

/// Two-state outcome. Most operations that can fail for data reasons return
/// Result instead of throwing; exceptions are reserved for I/O and
/// programmer errors.
template <typename T, typename E = Error>
class [[nodiscard]] Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() & { return std::get<0>(v_); }
  const T& value() const& { return std::get<0>(v_); }
  T&& value() && { return std::get<0>(std::move(v_)); }

  E& error() & { return std::get<1>(v_); }
  const E& error() const& { return std::get<1>(v_); }

 private:
  std::variant<T, E> v_;
};

// ---------------------------------------------------------------------------
// 5G slice identifiers
// ---------------------------------------------------------------------------

/// S-NSSAI: SST type byte plus optional 24-bit slice differentiator.
struct Snssai {
  int sst = 0;
  std::optional<std::uint32_t> sd;

  bool operator==(const Snssai&) const = default;
};

// ---------------------------------------------------------------------------
// IPv4 prefixes (classifier match fields and standalone ingress descriptors)
// ---------------------------------------------------------------------------

inline std::optional<std::uint32_t> parse_ipv4(std::string_view s) {
  std::uint32_t addr = 0;
  int octets = 0;
  std::uint32_t cur = 0;
  bool have_digit = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      cur = cur * 10 + static_cast<std::uint32_t>(c - '0');
      if (cur > 255) return std::nullopt;
      have_digit = true;
    } else if (c == '.') {
      if (!have_digit || octets == 3) return std::nullopt;
      addr = (addr << 8) | cur;
      cur = 0;
      have_digit = false;
      ++octets;
    } else {
      return std::nullopt;
    }
  }
  if (!have_digit || octets != 3) return std::nullopt;
  return (addr << 8) | cur;
}

inline std::string format_ipv4(std::uint32_t addr) {
  return std::to_string((addr >> 24) & 0xff) + "." + std::to_string((addr >> 16) & 0xff) + "." +
         std::to_string((addr >> 8) & 0xff) + "." + std::to_string(addr & 0xff);
}

/// CIDR-style IPv4 prefix, stored in canonical form (host bits cleared).
struct Ipv4Prefix {
  std::uint32_t addr = 0;
  int len = 0;

  static std::uint32_t mask_of(int len) {
    if (len <= 0) return 0;
    if (len >= 32) return 0xffffffffu;
    return 0xffffffffu << (32 - len);
  }

  static std::optional<Ipv4Prefix> parse(std::string_view s) {
    int len = 32;
    auto slash = s.find('/');
    std::string_view addr_part = s;
    if (slash != std::string_view::npos) {
      addr_part = s.substr(0, slash);
      auto len_part = s.substr(slash + 1);
      if (len_part.empty() || len_part.size() > 2) return std::nullopt;
      len = 0;
      for (char c : len_part) {
        if (c < '0' || c > '9') return std::nullopt;
        len = len * 10 + (c - '0');
      }
      if (len > 32) return std::nullopt;
    }
    auto addr = parse_ipv4(addr_part);
    if (!addr) return std::nullopt;
    return Ipv4Prefix{*addr & mask_of(len), len};
  }

  bool contains(std::uint32_t a) const { return (a & mask_of(len)) == addr; }

  std::string str() const { return format_ipv4(addr) + "/" + std::to_string(len); }

  bool operator==(const Ipv4Prefix&) const = default;
};

/// Source/destination prefix pair describing one standalone ingress route
/// (terminal-side network to hub-side network).
struct PrefixPair {
  Ipv4Prefix terminal;
  Ipv4Prefix hub;

  bool operator==(const PrefixPair&) const = default;
};

}  // namespace s3
