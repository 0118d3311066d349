#include "gratinguq/rng.hpp"

namespace gratinguq {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent,
                          std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t h = mix64(parent);
    for (auto t : tags)
        h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

std::uint64_t sample_seed(std::uint64_t master, std::uint64_t m)
{
    return derive_seed(master, {0x5a4d504cULL, m});
}

RandomStream make_stream(std::uint64_t seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32)};
    return RandomStream(seq);
}

}  // namespace gratinguq
