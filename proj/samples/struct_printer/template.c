#include <stdio.h>

struct /*C %name% */ sample {
/*C forall f in fields */
    double /*C %f% */ value ;
/*C end */
};

void /*C print_%name% */ print_sample ( const struct /*C %name% */ sample * s ) {
/*C forall f in fields */
    printf ( "%g " , s -> /*C %f% */ value ) ;
/*C end */
/*C if label */
    puts ( /*C " %label% " */ "sample" ) ;
/*C end */
}
