# Prime spectrum, dimension, reducedness and unit group of presented binoids.
