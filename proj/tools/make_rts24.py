#!/usr/bin/env python3
"""Writes data/rts24.json, a 24-hour day-ahead case assembled from the
public IEEE RTS-96 one-area data.

Network: 24 buses, 38 branches, susceptance = 100 / x (MW/rad on a
100 MVA base), continuous rating as rate_normal and the short-term
emergency rating as rate_emergency.

Fleet: the 32 RTS-96 units plus the bus 14 synchronous condenser as a
0 MW unit (33 in total). Hydro units are set to 48 MW so the fleet
totals 3393 MW. Energy costs are linearised from the RTS-96 heat rates
and fuel prices and are approximate.

Load: RTS-96 bus shares on a winter weekday profile, scaled so the
hourly system peak is exactly 2281 MW.
"""

import argparse
import json
from pathlib import Path

PEAK_MW = 2281.0

# Bus id -> share of the RTS-96 system peak (2850 MW).
BUS_LOAD = {
    1: 108, 2: 97, 3: 180, 4: 74, 5: 71, 6: 136, 7: 125, 8: 171, 9: 175, 10: 195,
    13: 265, 14: 194, 15: 317, 16: 100, 18: 333, 19: 181, 20: 128,
}

# Winter weekday, percent of the daily peak, hours 1..24.
PROFILE = [67, 63, 60, 59, 59, 60, 74, 86, 95, 96, 96, 95,
           95, 95, 93, 94, 99, 100, 100, 96, 91, 83, 73, 63]

# (from, to, reactance p.u., continuous MW, short-term emergency MW)
BRANCHES = [
    (1, 2, 0.0139, 175, 220), (1, 3, 0.2112, 175, 220), (1, 5, 0.0845, 175, 220),
    (2, 4, 0.1267, 175, 220), (2, 6, 0.1920, 175, 220), (3, 9, 0.1190, 175, 220),
    (3, 24, 0.0839, 400, 600), (4, 9, 0.1037, 175, 220), (5, 10, 0.0883, 175, 220),
    (6, 10, 0.0605, 175, 220), (7, 8, 0.0614, 175, 220), (8, 9, 0.1651, 175, 220),
    (8, 10, 0.1651, 175, 220), (9, 11, 0.0839, 400, 600), (9, 12, 0.0839, 400, 600),
    (10, 11, 0.0839, 400, 600), (10, 12, 0.0839, 400, 600), (11, 13, 0.0476, 500, 625),
    (11, 14, 0.0418, 500, 625), (12, 13, 0.0476, 500, 625), (12, 23, 0.0966, 500, 625),
    (13, 23, 0.0865, 500, 625), (14, 16, 0.0389, 500, 625), (15, 16, 0.0173, 500, 625),
    (15, 21, 0.0490, 500, 625), (15, 21, 0.0490, 500, 625), (15, 24, 0.0519, 500, 625),
    (16, 17, 0.0259, 500, 625), (16, 19, 0.0231, 500, 625), (17, 18, 0.0144, 500, 625),
    (17, 22, 0.1053, 500, 625), (18, 21, 0.0259, 500, 625), (18, 21, 0.0259, 500, 625),
    (19, 20, 0.0396, 500, 625), (19, 20, 0.0396, 500, 625), (20, 23, 0.0216, 500, 625),
    (20, 23, 0.0216, 500, 625), (21, 22, 0.0678, 500, 625),
]

# Unit class -> parameters. ramp is MW/min; costs in $/MWh, $/h, $.
UNIT_TYPES = {
    "U12":  dict(p_max=12,  p_min=2.4,  ramp=1,  energy=56.6, no_load=86.4,  startup=68,    min_up=4,  min_down=2),
    "U20":  dict(p_max=20,  p_min=16,   ramp=3,  energy=130.0, no_load=400.7, startup=5,    min_up=1,  min_down=1),
    "U48":  dict(p_max=48,  p_min=10,   ramp=10, energy=0.0,  no_load=0.0,   startup=0,     min_up=1,  min_down=1),
    "U76":  dict(p_max=76,  p_min=15.2, ramp=2,  energy=16.1, no_load=212.3, startup=1000,  min_up=8,  min_down=4),
    "U100": dict(p_max=100, p_min=25,   ramp=7,  energy=43.7, no_load=781.5, startup=2900,  min_up=8,  min_down=8),
    "U155": dict(p_max=155, p_min=54.3, ramp=3,  energy=12.4, no_load=382.2, startup=1500,  min_up=8,  min_down=8),
    "U197": dict(p_max=197, p_min=69,   ramp=3,  energy=48.6, no_load=832.8, startup=2500,  min_up=12, min_down=10),
    "U350": dict(p_max=350, p_min=140,  ramp=4,  energy=11.9, no_load=665.1, startup=4000,  min_up=24, min_down=48),
    "U400": dict(p_max=400, p_min=100,  ramp=20, energy=4.4,  no_load=395.4, startup=0,     min_up=1,  min_down=1),
    "SYNC": dict(p_max=0,   p_min=0,    ramp=0,  energy=0.0,  no_load=0.0,   startup=0,     min_up=1,  min_down=1),
}

# (bus, unit class, count) in RTS-96 unit order.
FLEET = [
    (1, "U20", 2), (1, "U76", 2), (2, "U20", 2), (2, "U76", 2), (7, "U100", 3),
    (13, "U197", 3), (14, "SYNC", 1), (15, "U12", 5), (15, "U155", 1), (16, "U155", 1),
    (18, "U400", 1), (21, "U400", 1), (22, "U48", 6), (23, "U155", 2), (23, "U350", 1),
]


def generators():
    out = []
    for bus, kind, count in FLEET:
        t = UNIT_TYPES[kind]
        hourly = min(t["p_max"], 60 * t["ramp"])
        for _ in range(count):
            out.append({
                "id": len(out) + 1,
                "bus": bus,
                "energy_cost": t["energy"],
                "no_load_cost": t["no_load"],
                "startup_cost": t["startup"],
                "p_min": t["p_min"],
                "p_max": t["p_max"],
                "ramp_hourly": hourly,
                "ramp_startup": max(t["p_min"], hourly),
                "ramp_shutdown": max(t["p_min"], hourly),
                "ramp_10min": min(t["p_max"], 10 * t["ramp"]),
                "min_up": t["min_up"],
                "min_down": t["min_down"],
                "initial_on": False,
            })
    return out


def loads():
    total_share = sum(BUS_LOAD.values())
    rows = {}
    for bus, share in BUS_LOAD.items():
        rows[bus] = [round(PEAK_MW * share / total_share * pct / 100.0, 2) for pct in PROFILE]
    # Absorb rounding at the peak hour in the largest bus so the peak is exact.
    peak_hour = PROFILE.index(max(PROFILE))
    largest = max(BUS_LOAD, key=BUS_LOAD.get)
    residual = PEAK_MW - sum(r[peak_hour] for r in rows.values())
    rows[largest][peak_hour] = round(rows[largest][peak_hour] + residual, 2)
    return {str(bus): rows[bus] for bus in sorted(rows)}


def build(penalty):
    lines = [{
        "id": k + 1,
        "from": f,
        "to": t,
        "susceptance": round(100.0 / x, 4),
        "rate_normal": normal,
        "rate_emergency": emergency,
    } for k, (f, t, x, normal, emergency) in enumerate(BRANCHES)]
    load = loads()
    return {
        "name": "rts24",
        "reference_bus": 13,
        "horizon": len(PROFILE),
        "buses": [{"id": n, "name": f"bus{n}"} for n in range(1, 25)],
        "generators": generators(),
        "lines": lines,
        "load": load,
        "default_penalty": penalty,
        "cdr": {
            "cap_fraction": 0.3,
            "penalty": {},
            "participating_buses": [int(b) for b in load],
        },
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "rts24.json")
    parser.add_argument("--penalty", type=float, default=1000.0, help="uniform CDR penalty, $/MWh")
    args = parser.parse_args()
    case = build(args.penalty)
    args.out.write_text(json.dumps(case, indent=1) + "\n")
    peak = max(sum(row[t] for row in case["load"].values()) for t in range(case["horizon"]))
    capacity = sum(g["p_max"] for g in case["generators"])
    print(f"{args.out}: {len(case['generators'])} units, {capacity:g} MW capacity, peak {peak:.2f} MW")


if __name__ == "__main__":
    main()
