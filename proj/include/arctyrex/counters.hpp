#pragma once

#include <cstdint>

namespace arctyrex {

/// Operation counts accumulated by the calling thread. Each worker thread owns
/// its own instance; the runtime snapshots it around every batch.
struct OpCounters {
    uint64_t bootstraps = 0;
    uint64_t keyswitches = 0;
    uint64_t external_products = 0;
    uint64_t ntt_forward = 0;
    uint64_t ntt_inverse = 0;

    OpCounters& operator+=(const OpCounters& o) {
        bootstraps += o.bootstraps;
        keyswitches += o.keyswitches;
        external_products += o.external_products;
        ntt_forward += o.ntt_forward;
        ntt_inverse += o.ntt_inverse;
        return *this;
    }
    friend OpCounters operator-(OpCounters a, const OpCounters& b) {
        a.bootstraps -= b.bootstraps;
        a.keyswitches -= b.keyswitches;
        a.external_products -= b.external_products;
        a.ntt_forward -= b.ntt_forward;
        a.ntt_inverse -= b.ntt_inverse;
        return a;
    }
    friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

OpCounters& thread_counters();

}  // namespace arctyrex
