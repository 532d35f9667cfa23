#include "knapforge.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "knapforge/analysis.hpp"
#include "knapforge/bench.hpp"
#include "knapforge/cryptosystems.hpp"
#include "knapforge/keyfile.hpp"
#include "knapforge/lattice.hpp"
#include "knapforge/reduction.hpp"

using namespace knapforge;

struct kf_key {
  Key key;
};

namespace {

thread_local std::string g_last_error;

kf_status fail(kf_status status, const char* msg) {
  g_last_error = msg;
  return status;
}

// Run `fn`, translating the core exception hierarchy to status codes.
template <typename Fn>
kf_status guard(Fn&& fn) {
  try {
    fn();
    return KF_OK;
  } catch (const ShapeError& e) {
    return fail(KF_ERR_SHAPE, e.what());
  } catch (const ParseError& e) {
    return fail(KF_ERR_PARSE, e.what());
  } catch (const DecodeError& e) {
    return fail(KF_ERR_DECODE, e.what());
  } catch (const DomainError& e) {
    return fail(KF_ERR_DOMAIN, e.what());
  } catch (const RankError& e) {
    return fail(KF_ERR_RANK, e.what());
  } catch (const ParamError& e) {
    return fail(KF_ERR_PARAM, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KF_ERR_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(KF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KF_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

kf_status require(bool cond, const char* msg) {
  if (cond) return KF_OK;
  return fail(KF_ERR_PARAM, msg);
}

std::vector<Nat> parse_csv_nats(const char* csv) {
  std::vector<Nat> out;
  std::stringstream ss{std::string(csv ? csv : "")};
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_nat(tok));
  if (out.empty()) throw ParamError("empty list");
  return out;
}

}  // namespace

extern "C" {

const char* kf_status_str(kf_status status) {
  switch (status) {
    case KF_OK: return "ok";
    case KF_ERR_PARAM: return "parameter error";
    case KF_ERR_SHAPE: return "shape error";
    case KF_ERR_PARSE: return "parse error";
    case KF_ERR_DECODE: return "decode error";
    case KF_ERR_DOMAIN: return "domain error";
    case KF_ERR_RANK: return "rank error";
    case KF_ERR_NOMEM: return "out of memory";
    case KF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* kf_last_error(void) { return g_last_error.c_str(); }

void kf_buffer_free(void* p) { ::operator delete(p); }

kf_status kf_keygen(int system, int variant, uint32_t s, const char* p_dec,
                    uint32_t alphabet, uint64_t seed, kf_key** pub_out,
                    kf_key** priv_out) {
  if (kf_status st = require(p_dec && pub_out && priv_out,
                             "kf_keygen: null argument"))
    return st;
  return guard([&] {
    Params params;
    params.s = s;
    params.p = parse_nat(p_dec);
    params.alphabet = alphabet;
    params.variant = variant;
    params.system = system;
    params.seed = seed;
    Key pub, priv;
    switch (system) {
      case 1: {
        auto [pk, sk] = keygen1(params);
        pub = std::move(pk);
        priv = std::move(sk);
        break;
      }
      case 2: {
        auto [pk, sk] = keygen2(params);
        pub = std::move(pk);
        priv = std::move(sk);
        break;
      }
      case 3: {
        auto [pk, sk] = keygen3(params);
        pub = std::move(pk);
        priv = std::move(sk);
        break;
      }
      default:
        throw ParamError("system must be 1, 2 or 3");
    }
    *pub_out = new kf_key{std::move(pub)};
    *priv_out = new kf_key{std::move(priv)};
  });
}

void kf_key_free(kf_key* key) { delete key; }

kf_status kf_key_serialize(const kf_key* key, char** text_out) {
  if (kf_status st = require(key && text_out, "kf_key_serialize: null"))
    return st;
  return guard([&] { *text_out = dup_string(serialize_key(key->key)); });
}

kf_status kf_key_parse(const char* text, kf_key** key_out) {
  if (kf_status st = require(text && key_out, "kf_key_parse: null")) return st;
  return guard([&] { *key_out = new kf_key{parse_key(text)}; });
}

int kf_key_system(const kf_key* key) {
  return key ? key_system(key->key) : -1;
}

int kf_key_is_private(const kf_key* key) {
  return key ? (key_is_private(key->key) ? 1 : 0) : -1;
}

uint32_t kf_key_dim(const kf_key* key) {
  return key ? static_cast<uint32_t>(key_dim(key->key)) : 0;
}

uint32_t kf_key_alphabet(const kf_key* key) {
  return key ? key_public_part(key->key).alphabet : 0;
}

kf_status kf_encrypt_block(const kf_key* key, const uint8_t* digits,
                           size_t count, char** ct_dec_out) {
  if (kf_status st =
          require(key && digits && ct_dec_out, "kf_encrypt_block: null"))
    return st;
  return guard([&] {
    PublicKey pub = key_public_part(key->key);
    Message m(count);
    for (size_t i = 0; i < count; ++i) m[i] = Nat(digits[i]);
    *ct_dec_out = dup_string(encrypt(pub, m).get_str());
  });
}

kf_status kf_decrypt_block(const kf_key* key, const char* ct_dec,
                           uint8_t* digits_out, size_t count) {
  if (kf_status st =
          require(key && ct_dec && digits_out, "kf_decrypt_block: null"))
    return st;
  return guard([&] {
    if (!key_is_private(key->key))
      throw ParamError("kf_decrypt_block: private key required");
    if (count != key_dim(key->key))
      throw ShapeError("kf_decrypt_block: count != s");
    Nat ct = parse_nat(ct_dec);
    Message m;
    if (const auto* p1 = std::get_if<PrivateKey1>(&key->key))
      m = decrypt1(*p1, ct);
    else if (const auto* p2 = std::get_if<PrivateKey2>(&key->key))
      m = decrypt2(*p2, ct);
    else
      m = decrypt3(std::get<PrivateKey3>(key->key), ct);
    for (size_t i = 0; i < count; ++i)
      digits_out[i] = static_cast<uint8_t>(m[i].get_ui());
  });
}

kf_status kf_encrypt_bytes(const kf_key* key, const uint8_t* data, size_t size,
                           char** text_out) {
  if (kf_status st = require(key && text_out && (data || size == 0),
                             "kf_encrypt_bytes: null"))
    return st;
  return guard([&] {
    PublicKey pub = key_public_part(key->key);
    *text_out =
        dup_string(chunk_encrypt(pub, std::span<const uint8_t>(data, size)));
  });
}

kf_status kf_decrypt_bytes(const kf_key* key, const char* text,
                           uint8_t** data_out, size_t* size_out) {
  if (kf_status st = require(key && text && data_out && size_out,
                             "kf_decrypt_bytes: null"))
    return st;
  return guard([&] {
    std::vector<uint8_t> bytes = chunk_decrypt(key->key, text);
    uint8_t* out = static_cast<uint8_t*>(::operator new(bytes.size() + 1));
    std::memcpy(out, bytes.data(), bytes.size());
    out[bytes.size()] = 0;
    *data_out = out;
    *size_out = bytes.size();
  });
}

kf_status kf_density(const kf_key* key, double* out) {
  if (kf_status st = require(key && out, "kf_density: null")) return st;
  return guard([&] { *out = density(key_public_row(key->key)); });
}

kf_status kf_pseudokeys(const kf_key* key, const char* q_max_dec,
                        char** report_out) {
  if (kf_status st = require(key && report_out, "kf_pseudokeys: null"))
    return st;
  return guard([&] {
    const RowVec& w = key_public_row(key->key);
    Nat q_max;
    if (q_max_dec) {
      q_max = parse_nat(q_max_dec);
    } else {
      for (const Int& v : w.e)
        if (v > q_max) q_max = v;
    }
    std::optional<Nat> true_q;
    if (const auto* p2 = std::get_if<PrivateKey2>(&key->key))
      true_q = p2->q1;
    PseudoKeyReport report = find_pseudokeys(w, q_max, true_q);
    *report_out = dup_string(report.to_text());
  });
}

kf_status kf_experiment_uniqueness(uint32_t s, uint64_t p_lo, uint64_t p_hi,
                                   uint32_t trials, uint64_t seed,
                                   double* fraction_out, char** report_out) {
  return guard([&] {
    RandomSource rng(seed);
    UniquenessResult result =
        uniqueness_experiment(s, Nat(static_cast<unsigned long>(p_lo)),
                              Nat(static_cast<unsigned long>(p_hi)), trials,
                              rng);
    if (fraction_out) *fraction_out = result.unique_fraction;
    if (report_out) *report_out = dup_string(result.to_text());
  });
}

kf_status kf_experiment_restsum(const char* q_dec, uint32_t s,
                                int monte_carlo, uint32_t trials,
                                uint64_t seed, char** report_out) {
  if (kf_status st = require(q_dec != nullptr, "kf_experiment_restsum: null"))
    return st;
  return guard([&] {
    Nat q = parse_nat(q_dec);
    Rat p;
    if (monte_carlo) {
      RandomSource rng(seed);
      p = rest_sum_probability(q, s, RestSumMode::MonteCarlo, trials, &rng);
    } else {
      p = rest_sum_probability(q, s, RestSumMode::Exact);
    }
    Rat bound(3, 4);
    Rat b = 1;
    for (uint32_t i = 1; i < s; ++i) b *= bound;
    char buf[96];
    std::snprintf(buf, sizeof buf, " value=%.10g bound=%.10g\n", p.get_d(),
                  b.get_d());
    std::string text = "P=" + p.get_num().get_str() + "/" +
                       p.get_den().get_str() + buf;
    if (report_out) *report_out = dup_string(text);
  });
}

kf_status kf_experiment_count_si(uint32_t s, const char* t_dec,
                                 char** report_out) {
  if (kf_status st =
          require(t_dec && report_out, "kf_experiment_count_si: null"))
    return st;
  return guard([&] {
    Nat t = parse_nat(t_dec);
    auto [si, all] = count_superincreasing(s, t);
    Rat ratio(si, all);
    ratio.canonicalize();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", ratio.get_d());
    std::string text = "S=" + si.get_str() + " C=" + all.get_str() +
                       " ratio=" + buf + "\n";
    *report_out = dup_string(text);
  });
}

namespace {

// Stability spec text: s=, m=, x0=, eps=, q= lines; '#' comments.
void parse_stability_spec(const std::string& text, std::size_t& s, Message& m,
                          RowVec& x0, RowVec& eps, std::vector<Nat>& q_list) {
  std::istringstream in(text);
  std::string line;
  bool have_s = false, have_m = false, have_x0 = false, have_eps = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::size_t eq = line.find('=');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw ParseError("expected key=values", lineno);
    std::string name = line.substr(0, eq);
    std::istringstream vals(line.substr(eq + 1));
    std::vector<Nat> values;
    std::string tok;
    while (vals >> tok) values.push_back(parse_nat(tok));
    if (name == "s") {
      if (values.size() != 1 || !values[0].fits_ulong_p())
        throw ParseError("s needs one small value", lineno);
      s = values[0].get_ui();
      have_s = true;
    } else if (name == "m") {
      m = Message(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) m[i] = values[i];
      have_m = true;
    } else if (name == "x0") {
      x0 = RowVec(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) x0[i] = values[i];
      have_x0 = true;
    } else if (name == "eps") {
      eps = RowVec(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) eps[i] = values[i];
      have_eps = true;
    } else if (name == "q") {
      for (const Nat& v : values) q_list.push_back(v);
    } else {
      throw ParseError("unknown field '" + name + "'", lineno);
    }
  }
  if (!have_s || !have_m || !have_x0 || !have_eps || q_list.empty())
    throw ParamError("stability spec needs s, m, x0, eps and q fields");
}

}  // namespace

kf_status kf_experiment_stability(const char* spec_text, uint32_t samples,
                                  uint64_t seed, char** table_out) {
  if (kf_status st = require(spec_text && table_out,
                             "kf_experiment_stability: null"))
    return st;
  return guard([&] {
    std::size_t s = 0;
    Message m;
    RowVec x0, eps;
    std::vector<Nat> q_list;
    parse_stability_spec(spec_text, s, m, x0, eps, q_list);
    if (m.size() != s || x0.size() != s || eps.size() != s)
      throw ShapeError("stability spec: vector lengths must equal s");
    RandomSource rng(seed);
    StabilityResult result =
        stability_experiment(m, x0, q_list, eps, samples, rng);
    *table_out = dup_string(result.to_text());
  });
}

kf_status kf_attack(const kf_key* key, const char* ct_dec, int method,
                    uint64_t seed, int* recovered_out, char** outcome_out) {
  if (kf_status st = require(key && ct_dec, "kf_attack: null")) return st;
  return guard([&] {
    PublicKey pub = key_public_part(key->key);
    Nat ct = parse_nat(ct_dec);
    AttackOutcome outcome;
    if (method == 1) {
      outcome = attack1(pub, ct);
    } else if (method == 2) {
      RandomSource rng(seed);
      RatMatrix pert = random_unit_perturbation(pub.dim() + 1, rng);
      outcome = attack2(pub, ct, pert);
    } else {
      throw ParamError("kf_attack: method must be 1 or 2");
    }
    if (recovered_out) *recovered_out = outcome.message ? 1 : 0;
    if (outcome_out) *outcome_out = dup_string(outcome.to_line() + "\n");
  });
}

kf_status kf_reduce(const char* n_dec, uint32_t s, double eta, uint64_t seed,
                    int* found_out, char** report_out) {
  if (kf_status st = require(n_dec != nullptr, "kf_reduce: null")) return st;
  return guard([&] {
    Nat n = parse_nat(n_dec);
    RandomSource rng(seed);
    ReductionReport report = factor_via_problem4(n, s, eta, rng);
    if (found_out) *found_out = report.factor ? 1 : 0;
    if (report_out) *report_out = dup_string(report.to_line() + "\n");
  });
}

kf_status kf_bench(const char* metric, int system, int variant,
                   const char* s_list_csv, const char* p_list_csv,
                   uint32_t trials, uint64_t seed, char** table_out) {
  if (kf_status st = require(metric && s_list_csv && p_list_csv && table_out,
                             "kf_bench: null"))
    return st;
  return guard([&] {
    std::vector<Nat> s_nats = parse_csv_nats(s_list_csv);
    std::vector<std::size_t> s_list;
    for (const Nat& v : s_nats) {
      if (!v.fits_ulong_p()) throw ParamError("s value too large");
      s_list.push_back(v.get_ui());
    }
    std::vector<Nat> p_list = parse_csv_nats(p_list_csv);
    BenchTable table = run_bench(bench_metric_from_name(metric), system,
                                 variant, s_list, p_list, trials, seed);
    *table_out = dup_string(table.to_text());
  });
}

}  // extern "C"
