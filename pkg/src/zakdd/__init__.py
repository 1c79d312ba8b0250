"""Zak-OTFS delay-Doppler signal processing: transforms, pulsones, channels,
twisted convolution, TDM/FDM/OTFS pipelines and crystallization analysis."""

from .analysis import (
    AliasedCell,
    Flatness,
    SweepRow,
    aliasing_map,
    crystallization_sweep,
    flatness,
    power_profile,
    predictability_residual,
)
from .channel import OffGridError, add_awgn, apply_channel, fig7_channel, lattice_channel, on_grid_bins
from .core import (
    ChannelMode,
    ChannelPath,
    ChannelSpec,
    CrystallizationCheck,
    DDFilter,
    DDSignal,
    FrameParams,
    FreqSignal,
    SymbolGrid,
    TimeSignal,
    channel_from_json,
    channel_to_json,
    load_channel,
    validate_crystallization,
)
from .modem import (
    FilterSpec,
    ModemKind,
    effective_filter_probe,
    fdm_demodulate,
    fdm_modulate,
    otfs_demodulate,
    otfs_modulate,
    response_matrix,
    tdm_demodulate,
    tdm_modulate,
    transceive,
)
from .pulsone import dd_pulse, pulsone_fd, pulsone_gram, pulsone_td
from .twisted import channel_taps, effective_dd_filter, twisted_compose, twisted_conv
from .zak import dzt, freq_invert, freq_realize, idzt, quasi_extend, unitary_dft, unitary_idft

__version__ = "0.1.0"
