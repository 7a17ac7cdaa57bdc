#include "lazyc/encoding.hpp"

// Header-only for now; translation unit kept so the target owns the header.
