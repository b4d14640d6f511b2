#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbp/errors.hpp"

namespace tbp {

// Minimal arbitrary-precision unsigned integer: little-endian limbs in base
// 1e9. Only the operations search-space accounting needs: multiply/divide by
// machine words, compare, decimal rendering.
class BigUint {
public:
    BigUint() : limbs_{0} {}

    explicit BigUint(std::uint64_t value) {
        do {
            limbs_.push_back(static_cast<std::uint32_t>(value % kBase));
            value /= kBase;
        } while (value != 0);
    }

    BigUint& mul_u64(std::uint64_t factor) {
        if (factor == 0) {
            limbs_ = {0};
            return *this;
        }
        unsigned __int128 carry = 0;
        for (auto& limb : limbs_) {
            const unsigned __int128 cur = static_cast<unsigned __int128>(limb) * factor + carry;
            limb = static_cast<std::uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        while (carry != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
            carry /= kBase;
        }
        return *this;
    }

    // Exact division by a machine word; throws if a remainder is left.
    BigUint& div_exact_u64(std::uint64_t divisor) {
        if (divisor == 0) throw ValidationError("biguint: division by zero");
        unsigned __int128 rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            const unsigned __int128 cur = rem * kBase + limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(cur / divisor);
            rem = cur % divisor;
        }
        if (rem != 0) throw ValidationError("biguint: division was not exact");
        trim();
        return *this;
    }

    bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }
    bool operator!=(const BigUint& other) const { return !(*this == other); }

    bool operator<=(const BigUint& other) const {
        if (limbs_.size() != other.limbs_.size()) return limbs_.size() < other.limbs_.size();
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i];
        }
        return true;
    }

    bool fits_u64() const {
        return *this <= BigUint(~std::uint64_t{0});
    }

    std::uint64_t to_u64() const {
        if (!fits_u64()) throw ValidationError("biguint: value exceeds 64 bits");
        std::uint64_t value = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) value = value * kBase + limbs_[i];
        return value;
    }

    std::string str() const {
        std::string out = std::to_string(limbs_.back());
        for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limbs_[i]);
            out += std::string(9 - part.size(), '0') + part;
        }
        return out;
    }

    // C(n, k), exact at every intermediate step.
    static BigUint binomial(std::uint64_t n, std::uint64_t k) {
        if (k > n) return BigUint(0);
        if (k > n - k) k = n - k;
        BigUint result(1);
        for (std::uint64_t i = 1; i <= k; ++i) {
            result.mul_u64(n - k + i);
            result.div_exact_u64(i);
        }
        return result;
    }

    static BigUint pow(std::uint64_t base, std::uint64_t exponent) {
        BigUint result(1);
        for (std::uint64_t i = 0; i < exponent; ++i) result.mul_u64(base);
        return result;
    }

private:
    static constexpr std::uint64_t kBase = 1000000000ULL;

    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<std::uint32_t> limbs_;
};

} // namespace tbp
