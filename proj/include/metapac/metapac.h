/* placeholder */
