#include "knapforge/keyfile.hpp"

#include <charconv>

namespace knapforge {
namespace {

void put_line(std::string& out, const Int& v) {
  out += v.get_str();
  out += '\n';
}

void put_row(std::string& out, const RowVec& v) {
  for (const Int& x : v.e) put_line(out, x);
}

void put_perm(std::string& out, const Permutation& p) {
  for (std::uint32_t v : p.image()) {
    out += std::to_string(v);
    out += '\n';
  }
}

// Line-by-line cursor over the key text.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next(const char* what) {
    if (pos_ >= text_.size())
      throw ParseError(std::string("unexpected end of file, expected ") + what,
                       line_ + 1);
    std::size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos)
      throw ParseError("missing final newline", line_ + 1);
    std::string_view line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_;
    return line;
  }

  Nat next_nat(const char* what) {
    std::string_view tok = next(what);
    if (tok.empty())
      throw ParseError(std::string("empty line, expected ") + what, line_);
    for (char c : tok)
      if (c < '0' || c > '9')
        throw ParseError("non-decimal token '" + std::string(tok) +
                             "', expected " + what,
                         line_);
    return Nat(std::string(tok), 10);
  }

  RowVec next_row(std::size_t n, const char* what) {
    RowVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = next_nat(what);
    return v;
  }

  Permutation next_perm(std::size_t n, const char* what) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i) {
      Nat v = next_nat(what);
      if (!v.fits_ulong_p() || v.get_ui() >= n)
        throw ParseError(std::string("permutation value out of range in ") +
                             what,
                         line_);
      img[i] = static_cast<std::uint32_t>(v.get_ui());
    }
    try {
      return Permutation(std::move(img));
    } catch (const ParamError& e) {
      throw ParseError(std::string(what) + ": " + e.what(), line_);
    }
  }

  void expect_end() const {
    if (pos_ < text_.size())
      throw ParseError("trailing content after key body", line_ + 1);
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::uint64_t parse_u64_field(std::string_view tok, std::string_view name,
                              std::size_t line) {
  std::string prefix = std::string(name) + "=";
  if (tok.substr(0, prefix.size()) != prefix)
    throw ParseError("expected field " + prefix + "<value>, got '" +
                         std::string(tok) + "'",
                     line);
  std::string_view val = tok.substr(prefix.size());
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(val.begin(), val.end(), out);
  if (ec != std::errc() || ptr != val.end())
    throw ParseError("bad value for field " + prefix, line);
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string serialize_key(const Key& key) {
  std::string out = "KNAPFORGE v1 ";
  out += std::to_string(key_system(key));
  out += key_is_private(key) ? " priv" : " pub";
  out += '\n';

  auto header2 = [&](std::size_t s, unsigned alphabet, int variant,
                     std::uint64_t seed) {
    out += "s=" + std::to_string(s) + " M=" + std::to_string(alphabet) +
           " variant=" + std::to_string(variant) +
           " seed=" + std::to_string(seed) + "\n";
  };

  if (const auto* pub = std::get_if<PublicKey>(&key)) {
    header2(pub->dim(), pub->alphabet, pub->variant, pub->seed);
    put_row(out, pub->x);
  } else if (const auto* p1 = std::get_if<PrivateKey1>(&key)) {
    std::size_t s = p1->x0.size();
    header2(s, p1->alphabet, p1->variant, p1->seed);
    put_row(out, p1->x0);
    for (const Nat& q : p1->q) put_line(out, q);
    for (const Nat& p : p1->p_mult) put_line(out, p);
    put_line(out, p1->eps.x_bound);
    put_perm(out, p1->eps.sigma);
    put_perm(out, p1->eps.tau);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i; j < s; ++j) put_line(out, p1->eps.u.at(i, j));
    put_row(out, p1->x_pub);
  } else if (const auto* p2 = std::get_if<PrivateKey2>(&key)) {
    std::size_t s = p2->x0.size();
    header2(s, p2->alphabet, p2->variant, p2->seed);
    put_row(out, p2->x0);
    put_line(out, p2->q1);
    put_line(out, p2->p1);
    put_perm(out, p2->row.sigma);
    put_row(out, p2->row.eps);
    put_row(out, p2->x_pub);
  } else {
    const auto& p3 = std::get<PrivateKey3>(key);
    std::size_t s = p3.x0.size();
    header2(s, p3.alphabet, p3.variant, p3.seed);
    put_row(out, p3.x0);
    put_line(out, p3.q1);
    put_line(out, p3.p1);
    put_line(out, p3.q2);
    put_line(out, p3.p2);
    put_perm(out, p3.mu.sigma);
    put_row(out, p3.eps1);
    put_row(out, p3.eps2);
    put_row(out, p3.x_pub);
  }
  return out;
}

Key parse_key(std::string_view text) {
  LineReader reader(text);

  std::string_view header = reader.next("header");
  auto fields = split_ws(header);
  if (fields.size() != 4 || fields[0] != "KNAPFORGE")
    throw ParseError("bad magic, expected 'KNAPFORGE v1 <system> <role>'", 1);
  if (fields[1] != "v1")
    throw ParseError("unsupported format version '" + std::string(fields[1]) +
                         "'",
                     1);
  if (fields[2].size() != 1 || fields[2][0] < '1' || fields[2][0] > '3')
    throw ParseError("bad system id '" + std::string(fields[2]) + "'", 1);
  int system = fields[2][0] - '0';
  bool is_priv;
  if (fields[3] == "pub")
    is_priv = false;
  else if (fields[3] == "priv")
    is_priv = true;
  else
    throw ParseError("bad role '" + std::string(fields[3]) + "'", 1);

  std::string_view meta = reader.next("metadata line");
  auto mfields = split_ws(meta);
  if (mfields.size() != 4)
    throw ParseError("expected 's=<s> M=<M> variant=<v> seed=<seed>'", 2);
  std::uint64_t s64 = parse_u64_field(mfields[0], "s", 2);
  std::uint64_t m64 = parse_u64_field(mfields[1], "M", 2);
  std::uint64_t v64 = parse_u64_field(mfields[2], "variant", 2);
  std::uint64_t seed = parse_u64_field(mfields[3], "seed", 2);
  if (s64 == 0 || s64 > 1000000) throw ParseError("unreasonable s", 2);
  if (m64 < 2 || m64 > 1u << 20) throw ParseError("unreasonable M", 2);
  if (v64 != 1 && v64 != 2) throw ParseError("variant must be 1 or 2", 2);
  std::size_t s = static_cast<std::size_t>(s64);
  unsigned alphabet = static_cast<unsigned>(m64);
  int variant = static_cast<int>(v64);

  if (!is_priv) {
    PublicKey pub;
    pub.x = reader.next_row(s, "public key entry");
    pub.alphabet = alphabet;
    pub.system = system;
    pub.variant = variant;
    pub.seed = seed;
    reader.expect_end();
    return pub;
  }

  if (system == 1) {
    PrivateKey1 priv;
    priv.alphabet = alphabet;
    priv.variant = variant;
    priv.seed = seed;
    priv.x0 = reader.next_row(s, "x0 entry");
    priv.q.resize(s);
    for (auto& q : priv.q) q = reader.next_nat("q_i");
    priv.p_mult.resize(s);
    for (auto& p : priv.p_mult) p = reader.next_nat("p_i");
    Nat x_bound = reader.next_nat("x_bound");
    Permutation sigma = reader.next_perm(s, "sigma");
    Permutation tau = reader.next_perm(s, "tau");
    IntMatrix u(s, s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i; j < s; ++j) u.at(i, j) = reader.next_nat("U entry");
    try {
      priv.eps = EpsilonMatrix(s, x_bound, std::move(sigma), std::move(tau),
                               std::move(u));
    } catch (const Error& e) {
      throw ParseError(std::string("inconsistent epsilon matrix: ") + e.what(),
                       reader.line());
    }
    priv.x_pub = reader.next_row(s, "public row entry");
    reader.expect_end();
    return priv;
  }
  if (system == 2) {
    PrivateKey2 priv;
    priv.alphabet = alphabet;
    priv.variant = variant;
    priv.seed = seed;
    priv.x0 = reader.next_row(s, "x0 entry");
    priv.q1 = reader.next_nat("q1");
    priv.p1 = reader.next_nat("p1");
    priv.row.sigma = reader.next_perm(s, "sigma");
    priv.row.eps = reader.next_row(s, "eps entry");
    priv.x_pub = reader.next_row(s, "public row entry");
    reader.expect_end();
    return priv;
  }
  PrivateKey3 priv;
  priv.alphabet = alphabet;
  priv.variant = variant;
  priv.seed = seed;
  priv.x0 = reader.next_row(s, "x0 entry");
  priv.q1 = reader.next_nat("q1");
  priv.p1 = reader.next_nat("p1");
  priv.q2 = reader.next_nat("q2");
  priv.p2 = reader.next_nat("p2");
  priv.mu.sigma = reader.next_perm(s, "sigma");
  priv.eps1 = reader.next_row(s, "eps1 entry");
  priv.eps2 = reader.next_row(s, "eps2 entry");
  priv.x_pub = reader.next_row(s, "public row entry");
  for (std::size_t j = 0; j < s; ++j) {
    if (priv.eps2[j] < priv.eps1[j])
      throw ParseError("eps2 < eps1 at column " + std::to_string(j),
                       reader.line());
  }
  priv.mu.eps = RowVec(s);
  for (std::size_t j = 0; j < s; ++j)
    priv.mu.eps[j] = priv.eps2[j] - priv.eps1[j];
  reader.expect_end();
  return priv;
}

int key_system(const Key& key) {
  if (std::holds_alternative<PublicKey>(key))
    return std::get<PublicKey>(key).system;
  if (std::holds_alternative<PrivateKey1>(key)) return 1;
  if (std::holds_alternative<PrivateKey2>(key)) return 2;
  return 3;
}

bool key_is_private(const Key& key) {
  return !std::holds_alternative<PublicKey>(key);
}

std::size_t key_dim(const Key& key) { return key_public_row(key).size(); }

const RowVec& key_public_row(const Key& key) {
  if (const auto* pub = std::get_if<PublicKey>(&key)) return pub->x;
  if (const auto* p1 = std::get_if<PrivateKey1>(&key)) return p1->x_pub;
  if (const auto* p2 = std::get_if<PrivateKey2>(&key)) return p2->x_pub;
  return std::get<PrivateKey3>(key).x_pub;
}

PublicKey key_public_part(const Key& key) {
  if (const auto* pub = std::get_if<PublicKey>(&key)) return *pub;
  PublicKey pub;
  pub.x = key_public_row(key);
  pub.system = key_system(key);
  if (const auto* p1 = std::get_if<PrivateKey1>(&key)) {
    pub.alphabet = p1->alphabet;
    pub.variant = p1->variant;
    pub.seed = p1->seed;
  } else if (const auto* p2 = std::get_if<PrivateKey2>(&key)) {
    pub.alphabet = p2->alphabet;
    pub.variant = p2->variant;
    pub.seed = p2->seed;
  } else {
    const auto& p3 = std::get<PrivateKey3>(key);
    pub.alphabet = p3.alphabet;
    pub.variant = p3.variant;
    pub.seed = p3.seed;
  }
  return pub;
}

std::string chunk_encrypt(const PublicKey& pub,
                          std::span<const std::uint8_t> data) {
  if (pub.alphabet != 2)
    throw ParamError("chunk_encrypt: byte chunking requires M = 2");
  const std::size_t s = pub.dim();
  const std::size_t total_bits = data.size() * 8;
  const std::size_t blocks = (total_bits + s - 1) / s;

  std::string out = "KNAPCT v1 s=" + std::to_string(s) +
                    " blocks=" + std::to_string(blocks) + "\n";
  for (std::size_t b = 0; b < blocks; ++b) {
    Message m(s);
    for (std::size_t j = 0; j < s; ++j) {
      std::size_t bit = b * s + j;
      if (bit >= total_bits) break;  // zero padding
      std::uint8_t byte = data[bit / 8];
      m[j] = (byte >> (7 - bit % 8)) & 1;
    }
    put_line(out, encrypt(pub, m));
  }
  out += "bytes=" + std::to_string(data.size()) + "\n";
  return out;
}

std::vector<std::uint8_t> chunk_decrypt(const Key& priv,
                                        std::string_view text) {
  if (!key_is_private(priv))
    throw ParamError("chunk_decrypt: private key required");

  LineReader reader(text);
  std::string_view header = reader.next("header");
  auto fields = split_ws(header);
  if (fields.size() != 4 || fields[0] != "KNAPCT")
    throw ParseError("bad magic, expected 'KNAPCT v1 s=<s> blocks=<k>'", 1);
  if (fields[1] != "v1") throw ParseError("unsupported ciphertext version", 1);
  std::size_t s = parse_u64_field(fields[2], "s", 1);
  std::size_t blocks = parse_u64_field(fields[3], "blocks", 1);
  if (s != key_dim(priv))
    throw ParamError("chunk_decrypt: ciphertext s does not match the key");

  std::vector<Message> decoded(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    Nat ct = reader.next_nat("ciphertext");
    try {
      if (const auto* p1 = std::get_if<PrivateKey1>(&priv))
        decoded[b] = decrypt1(*p1, ct);
      else if (const auto* p2 = std::get_if<PrivateKey2>(&priv))
        decoded[b] = decrypt2(*p2, ct);
      else
        decoded[b] = decrypt3(std::get<PrivateKey3>(priv), ct);
    } catch (const Error& e) {
      throw DecodeError("block " + std::to_string(b) + ": " + e.what());
    }
  }

  std::string_view trailer = reader.next("bytes trailer");
  std::size_t nbytes = parse_u64_field(trailer, "bytes", reader.line());
  reader.expect_end();
  if ((nbytes * 8 + s - 1) / s != blocks)
    throw ParseError("trailer length inconsistent with block count",
                     reader.line());

  std::vector<std::uint8_t> out(nbytes, 0);
  const std::size_t total_bits = nbytes * 8;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < s; ++j) {
      std::size_t bit = b * s + j;
      if (bit >= total_bits) {
        if (decoded[b][j] != 0)
          throw DecodeError("block " + std::to_string(b) +
                            ": nonzero padding bit");
        continue;
      }
      if (decoded[b][j] == 1) out[bit / 8] |= 1u << (7 - bit % 8);
    }
  }
  return out;
}

}  // namespace knapforge
