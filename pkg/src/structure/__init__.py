# Difference groups, Smith normal form, toric volumes and the e_HK pipeline.
