# Closed-form throughput models
from src.analytic.timing import MacTiming, slot_costs, to_slots, phy_rate_for_mcs
from src.analytic.bianchi import (BianchiModel, bianchi_model, solve_tau, p_transmit,
                                  p_success, saturation_throughput, throughput_vs_occupancy)
from src.analytic.two_channel import (OccupancyPair, ThroughputReport, ModelTag, TwoChannelModel,
                                      legacy_throughput, npca_classic_throughput,
                                      npca_overhead_throughput, channel_access_probs,
                                      transition_matrix, steady_state, overhead_probs,
                                      overhead_coefficients, two_channel_model)
from src.analytic.ratio import throughput_ratio, balanced_ratio, crossover_threshold
