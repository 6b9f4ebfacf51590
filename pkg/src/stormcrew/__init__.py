"""Recovery planning toolkit for storm-damaged power distribution networks.

Pipeline: ingest OpenStreetMap roads, turn tilted-pole sensor readings into
road blockages, build an obstacle-aware travel-cost matrix, and schedule
repair crews to maximize cumulative restored power capacity.
"""

__version__ = "0.1.0"
