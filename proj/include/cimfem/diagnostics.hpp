#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cimfem {

/// Receives non-fatal accuracy warnings (out-of-window evaluation, contour
/// vertex below a source pole, spectral truncation). The default handler
/// writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;

/// Installs a handler and returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// Routes warnings into a string list for its lifetime.
class ScopedWarningCapture {
public:
    ScopedWarningCapture();
    ~ScopedWarningCapture();
    ScopedWarningCapture(const ScopedWarningCapture&) = delete;
    ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

    [[nodiscard]] const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
    WarningHandler previous_;
};

}  // namespace cimfem
