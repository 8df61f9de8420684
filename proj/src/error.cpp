#include "sectorfolio/error.hpp"

namespace sectorfolio
{
    std::string_view to_string(ErrorKind kind) noexcept
    {
        switch (kind)
        {
        case ErrorKind::format: return "format";
        case ErrorKind::missing_ticker: return "missing-ticker";
        case ErrorKind::empty_panel: return "empty-panel";
        case ErrorKind::empty_universe: return "empty-universe";
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::domain: return "domain";
        case ErrorKind::degenerate_asset: return "degenerate-asset";
        case ErrorKind::alignment: return "alignment";
        case ErrorKind::division_degenerate: return "division-degenerate";
        case ErrorKind::empty_cloud: return "empty-cloud";
        case ErrorKind::degenerate_sample: return "degenerate-sample";
        case ErrorKind::empty_summary: return "empty-summary";
        case ErrorKind::io: return "io";
        case ErrorKind::network: return "network";
        }
        return "unknown";
    }

} // namespace sectorfolio
