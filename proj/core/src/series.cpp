#include "qcfl/series.hpp"

#include <algorithm>
#include <set>

#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

void require_same_domain(const DomainPtr& a, const DomainPtr& b) {
    if (!a || !b || !a->same_as(*b))
        throw DomainMismatchError("series domains differ: " + (a ? a->name() : "<none>") + " vs " +
                                  (b ? b->name() : "<none>"));
}

} // namespace

Series sum_series(const Series& a, const Series& b) {
    require_same_domain(a.domain, b.domain);
    Series out;
    out.domain = a.domain;
    out.provenance = Provenance::Sum;
    auto ea = a.eval;
    auto eb = b.eval;
    DomainPtr d = a.domain;
    out.eval = [d, ea, eb](const Word& w) { return d->add(ea(w), eb(w)); };
    if (a.support_probe && b.support_probe) {
        auto pa = a.support_probe;
        auto pb = b.support_probe;
        out.support_probe = [d, pa, pb](std::size_t n) {
            SupportMap m = pa(n);
            for (const auto& [w, v] : pb(n)) {
                auto it = m.find(w);
                if (it == m.end())
                    m.emplace(w, v);
                else
                    it->second = d->add(it->second, v);
            }
            // values may cancel to zero only in exotic monoids; keep the map exact
            for (auto it = m.begin(); it != m.end();) {
                if (it->second == d->zero())
                    it = m.erase(it);
                else
                    ++it;
            }
            return m;
        };
    }
    return out;
}

Series sum_series(const std::vector<Series>& summands, const DomainPtr& domain) {
    for (const Series& s : summands) require_same_domain(domain, s.domain);
    Series out;
    out.domain = domain;
    out.provenance = Provenance::Sum;
    auto parts = summands;
    out.eval = [domain, parts](const Word& w) {
        Weight acc = domain->zero();
        for (const Series& s : parts) acc = domain->add(acc, s.eval(w));
        return acc;
    };
    bool all_probes = std::all_of(parts.begin(), parts.end(),
                                  [](const Series& s) { return bool(s.support_probe); });
    if (all_probes) {
        out.support_probe = [domain, parts](std::size_t n) {
            SupportMap m;
            for (const Series& s : parts) {
                for (const auto& [w, v] : s.support_probe(n)) {
                    auto it = m.find(w);
                    if (it == m.end())
                        m.emplace(w, v);
                    else
                        it->second = domain->add(it->second, v);
                }
            }
            for (auto it = m.begin(); it != m.end();) {
                if (it->second == domain->zero())
                    it = m.erase(it);
                else
                    ++it;
            }
            return m;
        };
    }
    return out;
}

Series characteristic(DomainPtr d, std::function<bool(const Word&)> membership) {
    Series out;
    out.domain = d;
    out.provenance = Provenance::Characteristic;
    out.eval = [d, membership](const Word& w) { return membership(w) ? d->one() : d->zero(); };
    return out;
}

namespace {

/// Visits all words over the alphabet of length <= n in shortlex order.
/// The visitor returns false to stop.
template <typename Visit>
void for_each_word(const std::vector<std::string>& alphabet, std::size_t n, Visit&& visit) {
    for (std::size_t len = 0; len <= n; ++len) {
        if (len > 0 && alphabet.empty()) return;
        std::vector<std::size_t> idx(len, 0);
        while (true) {
            Word word;
            word.reserve(len);
            for (std::size_t i : idx) word.push_back(alphabet[i]);
            if (!visit(word)) return;
            std::size_t pos = len;
            while (pos > 0) {
                if (++idx[pos - 1] < alphabet.size()) break;
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
    }
}

} // namespace

CompareResult compare_up_to(const Series& a, const Series& b,
                            const std::vector<std::string>& alphabet, std::size_t n) {
    require_same_domain(a.domain, b.domain);
    const DomainPtr& d = a.domain;
    CompareResult result;

    if (a.support_probe && b.support_probe) {
        // mismatches can only occur where at least one side is nonzero
        SupportMap ma = a.support_probe(n);
        SupportMap mb = b.support_probe(n);
        std::optional<Word> best;
        auto consider = [&](const Word& w, const Weight& va, const Weight& vb) {
            if (va == vb) return;
            if (!best || ShortlexLess{}(w, *best)) best = w;
        };
        for (const auto& [w, va] : ma) {
            auto it = mb.find(w);
            consider(w, va, it == mb.end() ? d->zero() : it->second);
        }
        for (const auto& [w, vb] : mb) {
            if (!ma.count(w)) consider(w, d->zero(), vb);
        }
        if (best) {
            result.equal = false;
            result.witness = *best;
            result.lhs = a.eval(*best);
            result.rhs = b.eval(*best);
        }
        return result;
    }

    bool found = false;
    for_each_word(alphabet, n, [&](const Word& w) {
        Weight va = a.eval(w);
        Weight vb = b.eval(w);
        if (va != vb) {
            result.equal = false;
            result.witness = w;
            result.lhs = va;
            result.rhs = vb;
            found = true;
            return false;
        }
        return true;
    });
    (void)found;
    return result;
}

ImageSupport image_support_up_to(const Series& s, const std::vector<std::string>& alphabet,
                                 std::size_t n) {
    ImageSupport out;
    std::set<Weight, WeightCanonicalLess> image;
    const DomainPtr& d = s.domain;

    if (s.support_probe) {
        SupportMap m = s.support_probe(n);
        for (const auto& [w, v] : m) {
            image.insert(v);
            out.support.push_back(w);
        }
        // zero belongs to the image iff some word of length <= n is outside
        // the support
        std::size_t total = 0;
        std::size_t pow = 1;
        bool overflow = false;
        for (std::size_t len = 0; len <= n; ++len) {
            total += pow;
            if (!alphabet.empty() && pow > (1ull << 40) / alphabet.size()) {
                overflow = true;
                break;
            }
            pow *= alphabet.empty() ? 0 : alphabet.size();
        }
        if (overflow || m.size() < total) image.insert(d->zero());
    } else {
        for_each_word(alphabet, n, [&](const Word& w) {
            Weight v = s.eval(w);
            image.insert(v);
            if (v != d->zero()) out.support.push_back(w);
            return true;
        });
    }
    out.image.assign(image.begin(), image.end());
    return out;
}

} // namespace qcfl
