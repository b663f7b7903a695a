#pragma once

namespace marl {

// Training allocates and frees batch-sized activation buffers (hundreds of KB)
// on every update. With glibc defaults such blocks are mmap'd and returned to
// the kernel each time, so every update pays fresh page faults; this raises
// the mmap and trim thresholds once per process. No-op on other allocators.
void tune_allocator_for_training();

}  // namespace marl
