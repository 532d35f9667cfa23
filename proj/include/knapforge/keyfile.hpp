#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "knapforge/cryptosystems.hpp"

namespace knapforge {

using Key = std::variant<PublicKey, PrivateKey1, PrivateKey2, PrivateKey3>;

/// Text key format, ASCII with \n line ends:
///   line 1: KNAPFORGE v1 <system> <pub|priv>
///   line 2: s=<s> M=<M> variant=<v> seed=<seed-of-record>
///   then decimal integers, one per line, in a fixed order per system/role:
///     pub        : x (s entries)
///     priv sys 1 : x0 (s), q_1..q_s, p_1..p_s, x_bound, sigma (s), tau (s),
///                  U upper entries row-major (s(s+1)/2), x_pub (s)
///     priv sys 2 : x0 (s), q1, p1, sigma (s), eps (s), x_pub (s)
///     priv sys 3 : x0 (s), q1, p1, q2, p2, sigma (s), eps1 (s), eps2 (s),
///                  x_pub (s)
std::string serialize_key(const Key& key);

/// Inverse of serialize_key; ParseError (with line number) on anything
/// malformed, truncated or trailing.
Key parse_key(std::string_view text);

int key_system(const Key& key);
bool key_is_private(const Key& key);
std::size_t key_dim(const Key& key);

/// Public row of any key (the published row itself, or the private copy).
const RowVec& key_public_row(const Key& key);
PublicKey key_public_part(const Key& key);

/// Byte-stream encryption for M = 2: the input splits into s-bit blocks
/// (bytes big-endian, most significant bit first; final block zero padded),
/// each encrypted independently. Output text:
///   line 1: KNAPCT v1 s=<s> blocks=<k>
///   k ciphertext lines, then a trailer line bytes=<n> with the true length.
std::string chunk_encrypt(const PublicKey& pub,
                          std::span<const std::uint8_t> data);

std::vector<std::uint8_t> chunk_decrypt(const Key& priv,
                                        std::string_view text);

}  // namespace knapforge
