# Slot-level simulator modules
