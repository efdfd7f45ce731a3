#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <new>

namespace cdfi::detail {

// FFTW planning is not thread-safe; every plan creation and destruction in the
// library goes through this lock.
std::mutex& fftw_planner_mutex();

template <class T>
struct FftwDeleter {
    void operator()(T* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
    if (!p) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

}  // namespace cdfi::detail
